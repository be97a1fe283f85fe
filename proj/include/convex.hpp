#pragma once

#include "convex/answer.hpp"
#include "convex/baselines.hpp"
#include "convex/context.hpp"
#include "convex/distance_cache.hpp"
#include "convex/embeddings.hpp"
#include "convex/engine.hpp"
#include "convex/error.hpp"
#include "convex/eval.hpp"
#include "convex/frontier.hpp"
#include "convex/json_io.hpp"
#include "convex/kg_store.hpp"
#include "convex/qa0.hpp"
#include "convex/service.hpp"
