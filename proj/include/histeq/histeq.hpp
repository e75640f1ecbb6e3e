#pragma once

// Umbrella header for the library (the PNG adapter is opt-in: histeq/png.hpp).

#include "histeq/clahe.hpp"
#include "histeq/duo_lut.hpp"
#include "histeq/global_he.hpp"
#include "histeq/hkmdhe.hpp"
#include "histeq/image.hpp"
#include "histeq/metrics.hpp"
#include "histeq/parallel.hpp"
#include "histeq/params.hpp"
#include "histeq/pgm.hpp"
#include "histeq/phantom.hpp"
#include "histeq/pipeline.hpp"
#include "histeq/report.hpp"
#include "histeq/stats.hpp"
