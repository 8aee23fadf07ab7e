#pragma once

#include "kuramem/capacity.hpp"
#include "kuramem/dynamics.hpp"
#include "kuramem/equilibria.hpp"
#include "kuramem/graph.hpp"
#include "kuramem/memory.hpp"
