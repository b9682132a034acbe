#pragma once

#include "agentarr/errors.hpp"
#include "agentarr/graph.hpp"
#include "agentarr/isthmus.hpp"
#include "agentarr/pebble.hpp"
#include "agentarr/arrangement.hpp"
#include "agentarr/oracle.hpp"
#include "agentarr/gadgets.hpp"
