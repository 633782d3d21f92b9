// Copyright 2026 The ergobound Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "ergobound/asymptotics.hpp"
#include "ergobound/bounds.hpp"
#include "ergobound/errors.hpp"
#include "ergobound/linalg.hpp"
#include "ergobound/model.hpp"
#include "ergobound/moments.hpp"
#include "ergobound/rng.hpp"
#include "ergobound/serialization.hpp"
#include "ergobound/sim.hpp"
#include "ergobound/stability.hpp"
#include "ergobound/wasserstein.hpp"
