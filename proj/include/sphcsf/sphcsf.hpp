#pragma once

// Everything except json_io.hpp, which needs nlohmann/json on the include path.

#include "sphcsf/error.hpp"
#include "sphcsf/rng.hpp"
#include "sphcsf/sphere.hpp"
#include "sphcsf/curve.hpp"
#include "sphcsf/curve_io.hpp"
#include "sphcsf/flow.hpp"
#include "sphcsf/graph_flow.hpp"
#include "sphcsf/generators.hpp"
#include "sphcsf/jordan.hpp"
#include "sphcsf/straighten.hpp"
#include "sphcsf/levelset.hpp"
#include "sphcsf/corpus.hpp"
#include "sphcsf/verify.hpp"
