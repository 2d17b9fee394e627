#pragma once

// Umbrella header: the whole library in one include.

#include "finsleroid/core.hpp"
#include "finsleroid/metric.hpp"
#include "finsleroid/cospace.hpp"
#include "finsleroid/transform.hpp"
#include "finsleroid/tensor.hpp"
#include "finsleroid/geodesics.hpp"
#include "finsleroid/verify.hpp"
#include "finsleroid/io.hpp"
