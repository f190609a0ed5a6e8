#pragma once

#include "banditlab/env.hpp"
#include "banditlab/episode.hpp"
#include "banditlab/error.hpp"
#include "banditlab/experiment.hpp"
#include "banditlab/meta.hpp"
#include "banditlab/mortal.hpp"
#include "banditlab/parallel.hpp"
#include "banditlab/policies.hpp"
#include "banditlab/rng.hpp"
#include "banditlab/stats.hpp"
