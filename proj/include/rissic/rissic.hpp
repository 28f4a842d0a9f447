#pragma once

#include "rissic/core.hpp"
#include "rissic/rng.hpp"
#include "rissic/link_budget.hpp"
#include "rissic/unit_cell.hpp"
#include "rissic/scene.hpp"
#include "rissic/backend.hpp"
#include "rissic/optimizer.hpp"
#include "rissic/serialize.hpp"
#include "rissic/experiment.hpp"
#include "rissic/io.hpp"
