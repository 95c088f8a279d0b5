#pragma once

#include "scc/curvature.hpp"
#include "scc/dataio.hpp"
#include "scc/engine.hpp"
#include "scc/errors.hpp"
#include "scc/evaluation.hpp"
#include "scc/geometry.hpp"
#include "scc/kmeans.hpp"
#include "scc/random.hpp"
#include "scc/reference_tables.hpp"
#include "scc/spectral.hpp"
