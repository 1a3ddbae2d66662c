#pragma once

#include "uavneat/config.hpp"
#include "uavneat/env/channel.hpp"
#include "uavneat/env/environment.hpp"
#include "uavneat/io/cli.hpp"
#include "uavneat/io/config_file.hpp"
#include "uavneat/io/csv.hpp"
#include "uavneat/neat/genome.hpp"
#include "uavneat/neat/network.hpp"
#include "uavneat/neat/reproduction.hpp"
#include "uavneat/neat/serialize.hpp"
#include "uavneat/neat/species.hpp"
#include "uavneat/oracle/grid_search.hpp"
#include "uavneat/sim/episode.hpp"
#include "uavneat/sim/sweep.hpp"
#include "uavneat/sim/train.hpp"
