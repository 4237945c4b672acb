// Copyright 2026 The osplab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "osp/binary_config.hpp"
#include "osp/clock.hpp"
#include "osp/coupling.hpp"
#include "osp/enumerate.hpp"
#include "osp/harness.hpp"
#include "osp/limits.hpp"
#include "osp/lpp.hpp"
#include "osp/operators.hpp"
#include "osp/permutation.hpp"
#include "osp/philox.hpp"
#include "osp/report.hpp"
#include "osp/stats.hpp"
#include "osp/swap_process.hpp"
#include "osp/tasep.hpp"
#include "osp/tracy_widom.hpp"
