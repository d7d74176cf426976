// Principal-type inference for flat programs (parametric polymorphism,
// no classes).
#pragma once

#include "flw/ir.hpp"

namespace flw {

/// Returns a copy of `program` in which every function has a signature.
///
/// Functions are checked in dependency order, one strongly connected
/// component at a time; undeclared functions of a component are inferred
/// monomorphically and generalized afterwards.  A declared signature is
/// kept if it is an instance of the inferred type, otherwise a TypeError
/// names the function and the clashing types.  Type variables are renamed
/// a, b, c, ... in order of appearance.
Program infer_types(const Program& program);

/// Alpha-renames the type variables of `t` to a, b, c, ... left to right.
TypeExpr canonical_type(const TypeExpr& t);

}  // namespace flw
