#pragma once
// Umbrella header for the knowledge network library.

#include "ckn/algebra.hpp"
#include "ckn/assertion.hpp"
#include "ckn/compiled_kb.hpp"
#include "ckn/compiler.hpp"
#include "ckn/concept.hpp"
#include "ckn/context_tree.hpp"
#include "ckn/dsl.hpp"
#include "ckn/error.hpp"
#include "ckn/formulate.hpp"
#include "ckn/paths.hpp"
#include "ckn/query.hpp"
#include "ckn/snapshot.hpp"
