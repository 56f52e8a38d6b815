#pragma once

#include "lax/dsl/check.hpp"
#include "lax/dsl/diagnostic.hpp"
#include "lax/dsl/document.hpp"
#include "lax/dsl/emit.hpp"
#include "lax/dsl/lexer.hpp"
#include "lax/dsl/parser.hpp"
#include "lax/dsl/report.hpp"
