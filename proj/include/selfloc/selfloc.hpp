#pragma once
// Umbrella header for the whole library.

#include "selfloc/cli.hpp"
#include "selfloc/dsl.hpp"
#include "selfloc/dutchbook.hpp"
#include "selfloc/error.hpp"
#include "selfloc/model.hpp"
#include "selfloc/rational.hpp"
#include "selfloc/reference_checks.hpp"
#include "selfloc/reflection.hpp"
#include "selfloc/rules.hpp"
#include "selfloc/simplex.hpp"
#include "selfloc/simulation.hpp"
