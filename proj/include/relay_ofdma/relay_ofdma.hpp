#pragma once

#include "relay_ofdma/allocation.hpp"
#include "relay_ofdma/assignment.hpp"
#include "relay_ofdma/channel.hpp"
#include "relay_ofdma/dual_solver.hpp"
#include "relay_ofdma/errors.hpp"
#include "relay_ofdma/experiment.hpp"
#include "relay_ofdma/matrix.hpp"
#include "relay_ofdma/oracle.hpp"
#include "relay_ofdma/pair_gains.hpp"
#include "relay_ofdma/protocol.hpp"
#include "relay_ofdma/rng.hpp"
