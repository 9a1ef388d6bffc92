#pragma once

// Umbrella header.

#include "gtm/alphabet.hpp"
#include "gtm/analysis.hpp"
#include "gtm/builtins.hpp"
#include "gtm/carrier.hpp"
#include "gtm/dsl.hpp"
#include "gtm/encoding.hpp"
#include "gtm/engine.hpp"
#include "gtm/error.hpp"
#include "gtm/fixtures.hpp"
#include "gtm/machine.hpp"
#include "gtm/numbers.hpp"
#include "gtm/random.hpp"
#include "gtm/realize.hpp"
#include "gtm/represent.hpp"
#include "gtm/stream.hpp"
#include "gtm/weihrauch.hpp"
#include "gtm/word.hpp"
#include "gtm/wordfn.hpp"
