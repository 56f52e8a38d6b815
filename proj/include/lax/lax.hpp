#pragma once

#include "lax/rational.hpp"
#include "lax/generators.hpp"
#include "lax/element.hpp"
#include "lax/derivation.hpp"
#include "lax/linalg.hpp"
#include "lax/algebroid.hpp"
#include "lax/deformation.hpp"
#include "lax/morphism.hpp"
#include "lax/cohomology.hpp"
#include "lax/pullback.hpp"
#include "lax/morita.hpp"
#include "lax/foliation.hpp"
