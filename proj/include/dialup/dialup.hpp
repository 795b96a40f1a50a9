#pragma once

// Convenience umbrella for the whole library.

#include "dialup/dtm.hpp"
#include "dialup/errors.hpp"
#include "dialup/langgen.hpp"
#include "dialup/lexicon.hpp"
#include "dialup/metrics.hpp"
#include "dialup/noisers.hpp"
#include "dialup/phonology.hpp"
#include "dialup/resources.hpp"
#include "dialup/rng.hpp"
#include "dialup/text.hpp"
