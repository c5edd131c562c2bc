#pragma once

// Fractal analysis of polylines: recursive bend decomposition, head/tail
// breaks and the ht-index, power-law MLE fitting with bootstrap
// goodness-of-fit, box-counting dimension, and the curve generators needed to
// exercise all of it.

#include "fractline/analyze.hpp"
#include "fractline/bends.hpp"
#include "fractline/boxcount.hpp"
#include "fractline/errors.hpp"
#include "fractline/geometry.hpp"
#include "fractline/headtail.hpp"
#include "fractline/io.hpp"
#include "fractline/powerlaw.hpp"
#include "fractline/random.hpp"
