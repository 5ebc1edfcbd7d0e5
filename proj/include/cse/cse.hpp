#pragma once

#include "cse/event.hpp"
#include "cse/miner.hpp"
#include "cse/overlap.hpp"
#include "cse/score.hpp"
#include "cse/selector.hpp"
#include "cse/bitstream.hpp"
#include "cse/codec.hpp"
#include "cse/codec_io.hpp"
#include "cse/seq_io.hpp"
#include "cse/conveyor.hpp"
