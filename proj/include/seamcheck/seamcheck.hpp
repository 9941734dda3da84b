#pragma once

#include "seamcheck/binarization.hpp"
#include "seamcheck/color.hpp"
#include "seamcheck/config.hpp"
#include "seamcheck/error.hpp"
#include "seamcheck/hough.hpp"
#include "seamcheck/imagekit.hpp"
#include "seamcheck/inspect.hpp"
#include "seamcheck/report.hpp"
#include "seamcheck/stitch.hpp"
#include "seamcheck/synthgen.hpp"
