#include "flw/frontend.hpp"

#include <filesystem>

#include "flw/builtins.hpp"
#include "flw/ir_json.hpp"
#include "flw/pattern_compiler.hpp"
#include "flw/prolog.hpp"
#include "flw/surface.hpp"
#include "flw/types.hpp"
#include "flw/validate.hpp"

namespace flw {

namespace {

void require_valid(const Program& p) {
  auto v = validate(p);
  if (!v.empty()) throw ValidationError(std::move(v));
}

Program typed_or_untyped(Program p) {
  try {
    return infer_types(p);
  } catch (const TypeError&) {
    return p;
  }
}

bool returns_success(const FuncDecl& f) {
  if (!f.signature || arrow_count(*f.signature) < static_cast<std::size_t>(f.arity)) return false;
  const TypeExpr& r = result_type(*f.signature, f.arity);
  return r.is_cons() && r.name == kSuccessType && r.args.empty();
}

Program load_surface(std::string_view source, const std::string& module_name) {
  SurfaceModule m = parse_surface(source);
  Program p = compile_patterns(m, module_name);
  require_valid(p);
  Program typed = infer_types(p);

  std::map<std::string, CaseKind> kinds;
  for (const auto& d : m.decls)
    if (!d.annotation && !d.signature && returns_success(*typed.find_function(d.name)))
      kinds[d.name] = CaseKind::Flex;
  if (kinds.empty()) return typed;
  p = compile_patterns(m, module_name, kinds);
  require_valid(p);
  return infer_types(p);
}

}  // namespace

std::optional<Lang> parse_lang(std::string_view name) {
  if (name == "mcy") return Lang::Mcy;
  if (name == "prolog" || name == "pl") return Lang::Prolog;
  if (name == "flat" || name == "json") return Lang::Flat;
  return std::nullopt;
}

std::optional<Lang> lang_for_path(std::string_view path) {
  std::string ext = std::filesystem::path(path).extension().string();
  if (ext.empty()) return std::nullopt;
  return parse_lang(std::string_view(ext).substr(1));
}

std::string_view to_string(Lang lang) {
  switch (lang) {
    case Lang::Mcy:
      return "mcy";
    case Lang::Prolog:
      return "prolog";
    case Lang::Flat:
      return "flat";
  }
  return "?";
}

std::string module_name_for_path(std::string_view path) {
  std::string stem = std::filesystem::path(path).stem().string();
  return stem.empty() ? "main" : stem;
}

Program load_program(std::string_view source, Lang lang, const std::string& module_name) {
  switch (lang) {
    case Lang::Mcy:
      return load_surface(source, module_name);
    case Lang::Prolog: {
      Program p = translate_prolog(parse_prolog(source), module_name);
      require_valid(p);
      return typed_or_untyped(std::move(p));
    }
    case Lang::Flat: {
      Program p = parse_ir(source);
      require_valid(p);
      return typed_or_untyped(std::move(p));
    }
  }
  throw Error("unknown language");
}

}  // namespace flw
