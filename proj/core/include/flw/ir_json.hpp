// JSON text form of the intermediate representation.
//
//   {"module": str, "imports": [str], "types": [...], "functions": [...],
//    "operators": [...], "nametable": [[str, str]]}
//
// Expressions are tagged arrays: ["var","x"], ["lit",3],
// ["call","fn"|"cons",name,[args]], ["call","part",name,missing,[args]],
// ["case"|"fcase", e, [[pattern, e], ...]], ["or",e1,e2],
// ["free",[names],e], ["apply",e1,e2].  Patterns are ["pat",c,[vars]] or
// ["lpat",n].
#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "flw/ir.hpp"

namespace flw {

/// Throws ParseError (malformed JSON) or SchemaError (shape mismatch).
/// Arity and scoping problems are left for validate().
Program parse_ir(std::string_view text);

/// Deterministic output; throws ValidationError for invalid programs.
std::string serialize_ir(const Program& program);

/// Same text as serialize_ir but without the validity precondition.
std::string serialize_ir_unchecked(const Program& program);

/// 64-bit FNV-1a hash of the unchecked serialization; identifies a program
/// version for caching.
std::uint64_t content_hash(const Program& program);

}  // namespace flw
