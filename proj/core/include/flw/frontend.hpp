// Source-to-IR pipelines for every supported input language.
#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "flw/ir.hpp"

namespace flw {

enum class Lang { Mcy, Prolog, Flat };

/// Accepts `mcy`, `prolog`/`pl`, and `flat`/`json`.
std::optional<Lang> parse_lang(std::string_view name);
/// Chooses by file extension: `.mcy`, `.pl`, `.json`.
std::optional<Lang> lang_for_path(std::string_view path);
std::string_view to_string(Lang lang);

/// Parses, compiles, validates, and types a program.
///
/// Surface programs must type-check; a function without annotation or
/// signature whose inferred result type is Success is compiled flexibly.
/// Prolog and flat programs keep their functions untyped when inference
/// fails.  Throws ParseError, SchemaError, ValidationError, or TypeError.
Program load_program(std::string_view source, Lang lang, const std::string& module_name = "main");

/// Module name for a source path: the file name without directory and
/// extension.
std::string module_name_for_path(std::string_view path);

}  // namespace flw
