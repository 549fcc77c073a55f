#pragma once

#include "matchrobust/bigcount.hpp"
#include "matchrobust/counting.hpp"
#include "matchrobust/cultures.hpp"
#include "matchrobust/errors.hpp"
#include "matchrobust/mallows.hpp"
#include "matchrobust/measures.hpp"
#include "matchrobust/model.hpp"
#include "matchrobust/oracle.hpp"
#include "matchrobust/parallel.hpp"
#include "matchrobust/rng.hpp"
#include "matchrobust/stability.hpp"
#include "matchrobust/worstcase.hpp"
