#include "invlag/problem_file.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace invlag {

namespace {

struct Value {
  enum Kind { String, Number, Array } kind = Number;
  std::string text;           // raw text for String and Number
  std::vector<Value> items;   // Array
  int line = 0;

  double as_double(const char* what) const {
    if (kind != Number) throw ProblemError(std::string(what) + ": expected a number", line);
    return std::stod(text);
  }
  long as_int(const char* what) const {
    if (kind != Number) throw ProblemError(std::string(what) + ": expected an integer", line);
    return std::stol(text);
  }
  const std::string& as_string(const char* what) const {
    if (kind != String) throw ProblemError(std::string(what) + ": expected a string", line);
    return text;
  }
  Rational as_rational(const char* what) const {
    try {
      return Rational::parse(kind == String || kind == Number
                                 ? text
                                 : throw ProblemError(std::string(what) + ": expected a value",
                                                      line));
    } catch (const std::invalid_argument& e) {
      throw ProblemError(std::string(what) + ": " + e.what(), line);
    }
  }
  const std::vector<Value>& as_array(const char* what) const {
    if (kind != Array) throw ProblemError(std::string(what) + ": expected an array", line);
    return items;
  }
};

class FileParser {
public:
  explicit FileParser(const std::string& text) : text_(text) {}

  // section -> ordered (key, value)
  std::vector<std::pair<std::string, std::vector<std::pair<std::string, Value>>>> run() {
    std::vector<std::pair<std::string, std::vector<std::pair<std::string, Value>>>> sections;
    skip_noise();
    while (!at_end()) {
      if (peek() == '[') {
        sections.emplace_back(section_header(), std::vector<std::pair<std::string, Value>>{});
      } else {
        if (sections.empty())
          throw ProblemError("key outside of any [section]", line_);
        auto key = identifier();
        skip_spaces();
        if (!eat('=')) throw ProblemError("expected '=' after key '" + key + "'", line_);
        skip_spaces();
        sections.back().second.emplace_back(key, value());
      }
      skip_noise();
    }
    return sections;
  }

private:
  const std::string& text_;
  size_t pos_ = 0;
  int line_ = 1;

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  void advance() {
    if (text_[pos_] == '\n') ++line_;
    ++pos_;
  }
  bool eat(char c) {
    if (peek() == c) { advance(); return true; }
    return false;
  }
  void skip_spaces() {
    while (!at_end() && (peek() == ' ' || peek() == '\t')) advance();
  }
  void skip_noise() {  // whitespace, newlines, comments
    for (;;) {
      if (at_end()) return;
      char c = peek();
      if (c == '#') {
        while (!at_end() && peek() != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  std::string section_header() {
    advance();  // '['
    std::string name;
    while (!at_end() && peek() != ']') {
      name += peek();
      advance();
    }
    if (!eat(']')) throw ProblemError("unterminated section header", line_);
    return name;
  }

  std::string identifier() {
    std::string name;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' ||
                         peek() == '-')) {
      name += peek();
      advance();
    }
    if (name.empty()) throw ProblemError("expected a key", line_);
    return name;
  }

  Value value() {
    skip_noise();
    int at_line = line_;
    char c = peek();
    if (c == '"') {
      advance();
      std::string s;
      while (!at_end() && peek() != '"') {
        s += peek();
        advance();
      }
      if (!eat('"')) throw ProblemError("unterminated string", at_line);
      return Value{Value::String, s, {}, at_line};
    }
    if (c == '[') {
      advance();
      Value arr{Value::Array, "", {}, at_line};
      skip_noise();
      if (eat(']')) return arr;
      for (;;) {
        arr.items.push_back(value());
        skip_noise();
        if (eat(']')) break;
        if (!eat(',')) throw ProblemError("expected ',' or ']' in array", line_);
        skip_noise();
        if (eat(']')) break;  // tolerate a trailing comma
      }
      return arr;
    }
    // bare number (or boolean-ish token, which we treat as text)
    std::string tok;
    while (!at_end() && !std::isspace(static_cast<unsigned char>(peek())) && peek() != ',' &&
           peek() != ']' && peek() != '#') {
      tok += peek();
      advance();
    }
    if (tok.empty()) throw ProblemError("expected a value", at_line);
    return Value{Value::Number, tok, {}, at_line};
  }
};

}  // namespace

ProblemFile parse_problem_file(const std::string& text) {
  ProblemFile pf;
  auto sections = FileParser(text).run();
  bool gamma_seen = false;
  for (const auto& [section, entries] : sections) {
    if (section == "algebra") {
      for (const auto& [key, v] : entries) {
        if (key == "catalog") {
          pf.catalog = v.as_string("algebra.catalog");
        } else if (key == "dim") {
          pf.dim = static_cast<int>(v.as_int("algebra.dim"));
        } else if (key == "names") {
          for (const auto& item : v.as_array("algebra.names"))
            pf.names.push_back(item.as_string("algebra.names[]"));
        } else if (key == "constants") {
          for (const auto& t : v.as_array("algebra.constants")) {
            const auto& quad = t.as_array("algebra.constants[]");
            if (quad.size() != 4)
              throw ProblemError("algebra.constants entries are [i, j, k, value]", t.line);
            // dim may not be known yet; range-checked in make_algebra
            pf.constants.push_back({static_cast<int>(quad[0].as_int("i")),
                                    static_cast<int>(quad[1].as_int("j")),
                                    static_cast<int>(quad[2].as_int("k")),
                                    quad[3].as_rational("value")});
          }
        } else {
          throw ProblemError("unknown key algebra." + key, v.line);
        }
      }
    } else if (section == "params") {
      for (const auto& [key, v] : entries) {
        pf.params.emplace_back(key, v.kind == Value::String ? v.text : v.text);
      }
    } else if (section == "sode") {
      for (const auto& [key, v] : entries) {
        if (key == "gamma") {
          gamma_seen = true;
          if (v.kind == Value::String && v.text == "derive-from-lagrangian") {
            pf.derive_from_lagrangian = true;
          } else {
            for (const auto& item : v.as_array("sode.gamma"))
              pf.gamma.push_back(item.as_string("sode.gamma[]"));
          }
        } else if (key == "derive-from-lagrangian" || key == "derive_from_lagrangian") {
          gamma_seen = true;
          pf.derive_from_lagrangian = true;
        } else {
          throw ProblemError("unknown key sode." + key, v.line);
        }
      }
    } else if (section == "lagrangian") {
      for (const auto& [key, v] : entries) {
        if (key == "l") pf.lagrangian = v.as_string("lagrangian.l");
        else throw ProblemError("unknown key lagrangian." + key, v.line);
      }
    } else if (section == "multiplier") {
      pf.has_multiplier = true;
      for (const auto& [key, v] : entries) {
        if (key.size() != 3 || key[0] != 'k' || !std::isdigit((unsigned char)key[1]) ||
            !std::isdigit((unsigned char)key[2]))
          throw ProblemError("multiplier keys look like k11, k12, ...", v.line);
        int i = key[1] - '0', j = key[2] - '0';
        if (i > j) std::swap(i, j);
        pf.multiplier[{i, j}] = v.as_string("multiplier entry");
      }
    } else if (section == "region") {
      RegionSpec spec;
      for (const auto& [key, v] : entries) {
        if (key == "constraints") {
          for (const auto& c : v.as_array("region.constraints")) {
            const auto& pair = c.as_array("region.constraints[]");
            if (pair.size() != 2)
              throw ProblemError("region.constraints entries are [expr, sign]", c.line);
            std::string sign = pair[1].as_string("constraint sign");
            if (sign != ">0" && sign != "<0")
              throw ProblemError("constraint sign must be \">0\" or \"<0\"", pair[1].line);
            spec.constraints.emplace_back(pair[0].as_string("constraint expr"), sign);
          }
        } else if (key == "box") {
          for (const auto& b : v.as_array("region.box")) {
            const auto& pair = b.as_array("region.box[]");
            if (pair.size() != 2) throw ProblemError("region.box entries are [lo, hi]", b.line);
            spec.box.emplace_back(pair[0].as_double("box lo"), pair[1].as_double("box hi"));
          }
        } else if (key == "samples") {
          spec.samples = static_cast<int>(v.as_int("region.samples"));
        } else if (key == "seed") {
          spec.seed = static_cast<std::uint64_t>(v.as_int("region.seed"));
        } else {
          throw ProblemError("unknown key region." + key, v.line);
        }
      }
      pf.region = std::move(spec);
    } else if (section == "representation") {
      for (const auto& [key, v] : entries) {
        if (key != "matrices") throw ProblemError("unknown key representation." + key, v.line);
        std::vector<Matrix> mats;
        for (const auto& mv : v.as_array("representation.matrices")) {
          Matrix mat;
          for (const auto& row : mv.as_array("representation matrix")) {
            std::vector<double> r;
            for (const auto& x : row.as_array("representation matrix row"))
              r.push_back(x.as_double("matrix entry"));
            mat.push_back(std::move(r));
          }
          mats.push_back(std::move(mat));
        }
        pf.representation = std::move(mats);
      }
    } else if (section == "integrate") {
      IntegrateSpec spec;
      for (const auto& [key, v] : entries) {
        if (key == "w0") {
          for (const auto& x : v.as_array("integrate.w0"))
            spec.w0.push_back(x.as_double("integrate.w0[]"));
        } else if (key == "dt") {
          spec.dt = v.as_double("integrate.dt");
        } else if (key == "steps") {
          spec.steps = static_cast<int>(v.as_int("integrate.steps"));
        } else {
          throw ProblemError("unknown key integrate." + key, v.line);
        }
      }
      pf.integrate = std::move(spec);
    } else {
      throw ProblemError("unknown section [" + section + "]");
    }
  }
  if (gamma_seen && pf.derive_from_lagrangian && !pf.gamma.empty())
    throw ProblemError("exactly one of gamma / derive-from-lagrangian must be given");
  return pf;
}

ProblemFile load_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ProblemError("cannot open problem file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem_file(buf.str());
}

LieAlgebra ProblemFile::make_algebra() const {
  if (catalog) {
    if (dim != 0 || !constants.empty())
      throw ProblemError("give either algebra.catalog or dim/constants, not both");
    auto alg = catalog_algebra(*catalog);
    if (!alg) throw ProblemError("unknown catalog algebra '" + *catalog + "'");
    if (!names.empty()) {
      if (static_cast<int>(names.size()) != alg->dim())
        throw ProblemError("algebra.names length does not match catalog dimension");
      // Re-derive with custom names: rebuild from the catalog constants.
      std::vector<StructureTriple> triples;
      for (int i = 1; i <= alg->dim(); ++i) {
        for (int j = i + 1; j <= alg->dim(); ++j) {
          for (int k = 1; k <= alg->dim(); ++k) {
            if (!alg->c(k, i, j).is_zero()) triples.push_back({i, j, k, alg->c(k, i, j)});
          }
        }
      }
      return LieAlgebra::from_triples(alg->dim(), names, triples);
    }
    return *alg;
  }
  if (dim < 1) throw ProblemError("algebra.dim must be given (or use a catalog name)");
  for (const auto& t : constants) {
    if (t.i >= t.j) throw ProblemError("algebra.constants need i < j");
    if (t.i < 1 || t.j > dim || t.k < 1 || t.k > dim)
      throw ProblemError("algebra.constants index out of range");
  }
  LieAlgebra alg = LieAlgebra::from_triples(dim, names, constants);
  return alg;
}

std::vector<std::string> ProblemFile::param_names() const {
  std::vector<std::string> out;
  out.reserve(params.size());
  for (const auto& [k, _] : params) out.push_back(k);
  return out;
}

ParamMap ProblemFile::make_params() const {
  ParamMap out;
  for (const auto& [k, v] : params) {
    try {
      out[k] = Rational::parse(v);
    } catch (const std::invalid_argument& e) {
      throw ProblemError("parameter " + k + ": " + e.what());
    }
  }
  return out;
}

Expr ProblemFile::parse(const std::string& text, const LieAlgebra& alg) const {
  return parse_expr(text, alg.names(), param_names());
}

ReducedSODE ProblemFile::make_sode(const LieAlgebra& alg) const {
  ParamMap pm = make_params();
  if (derive_from_lagrangian) {
    if (!lagrangian) throw ProblemError("derive-from-lagrangian needs a [lagrangian] section");
    Expr l = parse(*lagrangian, alg).substitute_params(pm);
    auto gamma_exprs = derive_sode_symbolic(alg, l, pm);
    if (!gamma_exprs)
      throw ProblemError(
          "derive-from-lagrangian needs a constant invertible Hessian; "
          "give gamma explicitly otherwise");
    return ReducedSODE{alg, *gamma_exprs, pm};
  }
  if (gamma.empty()) throw ProblemError("[sode] gamma is required (or derive-from-lagrangian)");
  if (static_cast<int>(gamma.size()) != alg.dim())
    throw ProblemError("sode.gamma needs exactly one expression per coordinate");
  std::vector<Expr> gamma_exprs;
  for (const auto& g : gamma) gamma_exprs.push_back(parse(g, alg));
  return ReducedSODE{alg, std::move(gamma_exprs), std::move(pm)};
}

Region ProblemFile::make_region(const LieAlgebra& alg, std::uint64_t default_seed,
                                int default_samples) const {
  Region r = Region::default_box(alg.dim());
  r.seed = default_seed;
  r.samples = default_samples;
  if (region) {
    for (const auto& [expr_text, sign] : region->constraints) {
      r.constraints.push_back({parse(expr_text, alg), sign == ">0"});
    }
    if (!region->box.empty()) {
      if (static_cast<int>(region->box.size()) != alg.dim())
        throw ProblemError("region.box needs one [lo, hi] pair per coordinate");
      r.box = region->box;
    }
    if (region->samples) r.samples = *region->samples;
    if (region->seed) r.seed = *region->seed;
  }
  return r;
}

std::optional<Multiplier> ProblemFile::make_multiplier(const LieAlgebra& alg) const {
  if (!has_multiplier) return std::nullopt;
  Multiplier k(alg.dim());
  for (const auto& [ij, text] : multiplier) {
    if (ij.second > alg.dim())
      throw ProblemError("multiplier index out of range: k" + std::to_string(ij.first) +
                         std::to_string(ij.second));
    k.set(ij.first, ij.second, parse(text, alg));
  }
  return k;
}

std::optional<Expr> ProblemFile::make_lagrangian(const LieAlgebra& alg) const {
  if (!lagrangian) return std::nullopt;
  return parse(*lagrangian, alg);
}

std::optional<MatrixRep> ProblemFile::make_representation(const LieAlgebra& alg) const {
  if (!representation) return std::nullopt;
  MatrixRep rep;
  rep.basis = *representation;
  if (rep.basis.empty()) throw ProblemError("representation.matrices is empty");
  rep.m = static_cast<int>(rep.basis[0].size());
  rep.validate(alg);
  return rep;
}

}  // namespace invlag
