#pragma once

#include "cmab/bounds.hpp"
#include "cmab/commands.hpp"
#include "cmab/config.hpp"
#include "cmab/distribution.hpp"
#include "cmab/errors.hpp"
#include "cmab/feasibility.hpp"
#include "cmab/format.hpp"
#include "cmab/harness.hpp"
#include "cmab/instance.hpp"
#include "cmab/io.hpp"
#include "cmab/oracle.hpp"
#include "cmab/random.hpp"
#include "cmab/schedule.hpp"
#include "cmab/strategy.hpp"
