#pragma once

#include "error.hpp"
#include "scalar.hpp"
#include "param.hpp"
#include "diagram.hpp"
#include "semantics.hpp"
#include "match.hpp"
#include "rule.hpp"
#include "gadgets.hpp"
#include "registries.hpp"
#include "translate.hpp"
#include "soundness.hpp"
#include "simplify.hpp"
#include "harness.hpp"
#include "json_io.hpp"
