// Copyright 2026 The stprune Authors.
// Licensed under the Apache License, Version 2.0 (see LICENSE).

#pragma once

#include "stprune/bench.hpp"
#include "stprune/centrality.hpp"
#include "stprune/features.hpp"
#include "stprune/flow_model.hpp"
#include "stprune/graph.hpp"
#include "stprune/instance.hpp"
#include "stprune/linear_model.hpp"
#include "stprune/lp.hpp"
#include "stprune/milp.hpp"
#include "stprune/oracle.hpp"
#include "stprune/pipeline.hpp"
#include "stprune/random_instance.hpp"
#include "stprune/stp_io.hpp"
#include "stprune/weight.hpp"
