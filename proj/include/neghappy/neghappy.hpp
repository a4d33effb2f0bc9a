#pragma once

// Umbrella header: exact arithmetic in negative bases, the digit-power-sum
// dynamics on top of it, and constructive happiness witnesses.

#include "neghappy/atlas.hpp"
#include "neghappy/bigint.hpp"
#include "neghappy/errors.hpp"
#include "neghappy/goodset.hpp"
#include "neghappy/happy.hpp"
#include "neghappy/negabase.hpp"
#include "neghappy/rle.hpp"
#include "neghappy/runs.hpp"
#include "neghappy/serialize.hpp"
#include "neghappy/tower.hpp"
