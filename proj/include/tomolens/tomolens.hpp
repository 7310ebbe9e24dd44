//
// TomoLens - Copyright 2026 The TomoLens Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include "tomolens/common.hpp"
#include "tomolens/estimator.hpp"
#include "tomolens/experiment.hpp"
#include "tomolens/likelihood.hpp"
#include "tomolens/measurement.hpp"
#include "tomolens/optimize.hpp"
#include "tomolens/random.hpp"
#include "tomolens/serialization.hpp"
#include "tomolens/statemodel.hpp"
