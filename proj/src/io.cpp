#include "paraunit/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json_codec.hpp"
#include "paraunit/errors.hpp"

namespace paraunit::io {

namespace detail {

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

json matrix_to_json(const ComplexMatrix& a) {
  json data = json::array();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < a.cols(); ++j) row.push_back(complex_to_json(a(i, j)));
    data.push_back(std::move(row));
  }
  json out;
  out["rows"] = a.rows();
  out["cols"] = a.cols();
  out["data"] = std::move(data);
  return out;
}

}  // namespace detail

namespace {

using detail::complex_to_json;
using detail::json;
using detail::matrix_to_json;

json matrices_to_json(const std::vector<ComplexMatrix>& list) {
  json out = json::array();
  for (const auto& a : list) out.push_back(matrix_to_json(a));
  return out;
}

json header(std::string_view kind) {
  json out;
  out["format_version"] = kFormatVersion;
  out["kind"] = kind;
  return out;
}

json to_json(const BlaschkePotapovForm& f) {
  json out = header("bp");
  out["side"] = f.side() == Side::Iso ? "iso" : "coiso";
  out["p"] = f.p();
  out["m"] = f.m();
  out["constant"] = matrix_to_json(f.constant());
  json factors = json::array();
  for (const auto& fac : f.factors()) {
    json j;
    j["pole"] = fac.pole.is_infinite() ? json("inf") : complex_to_json(fac.pole.value());
    j["v"] = matrix_to_json(fac.v);
    factors.push_back(std::move(j));
  }
  out["factors"] = std::move(factors);
  return out;
}

json to_json(const StateSpaceRealization& ss) {
  json out = header("ss");
  out["n"] = ss.n();
  out["p"] = ss.p();
  out["m"] = ss.m();
  out["a"] = matrix_to_json(ss.a);
  out["b"] = matrix_to_json(ss.b);
  out["c"] = matrix_to_json(ss.c);
  out["d"] = matrix_to_json(ss.d);
  return out;
}

json to_json(const MFDForm& mfd) {
  json out = header("mfd");
  out["side"] = mfd.side == MfdSide::Right ? "right" : "left";
  out["p"] = mfd.p;
  out["m"] = mfd.m;
  out["num"] = matrices_to_json(mfd.num);
  out["den"] = matrices_to_json(mfd.den);
  return out;
}

json to_json(const LaurentPolyForm& lp) {
  json out = header("laurent");
  out["q"] = lp.q;
  out["coeffs"] = matrices_to_json(lp.coeffs);
  return out;
}

json to_json(const ParaunitaryParam& pp) {
  json out = header("params");
  out["side"] = pp.side == Side::Iso ? "iso" : "coiso";
  out["p"] = pp.p;
  out["m"] = pp.m;
  json poles = json::array();
  for (const auto& pole : pp.poles) {
    json j;
    switch (pole.kind) {
      case PoleParam::Kind::Zero: j["kind"] = "zero"; break;
      case PoleParam::Kind::Infinity: j["kind"] = "inf"; break;
      case PoleParam::Kind::Polar:
        j["kind"] = "polar";
        j["r"] = pole.r;
        j["theta"] = pole.theta;
        break;
    }
    poles.push_back(std::move(j));
  }
  out["poles"] = std::move(poles);
  out["directions"] = pp.directions;
  out["frame"] = pp.frame;
  return out;
}

json to_json(const SampleSet& s) {
  json out = header("samples");
  out["p"] = s.p;
  out["m"] = s.m;
  json list = json::array();
  for (std::size_t k = 0; k < s.size(); ++k) {
    json j;
    j["z"] = complex_to_json(s.points[k]);
    j["value"] = matrix_to_json(s.values[k]);
    list.push_back(std::move(j));
  }
  out["samples"] = std::move(list);
  return out;
}

// ---- reading ---------------------------------------------------------------

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::ParseError, "field " + (path.empty() ? std::string("<root>") : path) + ": " + what);
}

const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

double read_double(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "non-finite number");
  return v;
}

std::size_t read_size(const json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
    fail(path, "expected a non-negative integer");
  }
  return j.get<std::size_t>();
}

int read_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  const long long v = j.get<long long>();
  if (v < -1000000 || v > 1000000) fail(path, "integer out of range");
  return static_cast<int>(v);
}

std::string read_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

const json& read_array(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  return j;
}

Complex read_complex(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) fail(path, "expected [re, im]");
  return {read_double(j[0], index(path, 0)), read_double(j[1], index(path, 1))};
}

ComplexMatrix read_matrix(const json& j, const std::string& path) {
  const std::size_t rows = read_size(field(j, "rows", path), join(path, "rows"));
  const std::size_t cols = read_size(field(j, "cols", path), join(path, "cols"));
  const std::string dpath = join(path, "data");
  const json& data = read_array(field(j, "data", path), dpath);
  if (data.size() != rows) fail(dpath, "expected " + std::to_string(rows) + " rows");
  ComplexMatrix a(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const std::string rpath = index(dpath, i);
    const json& row = read_array(data[i], rpath);
    if (row.size() != cols) fail(rpath, "expected " + std::to_string(cols) + " entries");
    for (std::size_t k = 0; k < cols; ++k) a(i, k) = read_complex(row[k], index(rpath, k));
  }
  return a;
}

std::vector<ComplexMatrix> read_matrices(const json& j, const std::string& path) {
  std::vector<ComplexMatrix> out;
  const json& list = read_array(j, path);
  for (std::size_t i = 0; i < list.size(); ++i) out.push_back(read_matrix(list[i], index(path, i)));
  return out;
}

Side read_side(const json& j, const std::string& path) {
  const std::string s = read_string(j, path);
  if (s == "iso") return Side::Iso;
  if (s == "coiso") return Side::Coiso;
  fail(path, "expected \"iso\" or \"coiso\"");
}

void expect_shape(const ComplexMatrix& a, std::size_t rows, std::size_t cols, const std::string& path) {
  if (a.rows() != rows || a.cols() != cols) {
    fail(path, "expected " + std::to_string(rows) + "x" + std::to_string(cols));
  }
}

// Library errors raised while assembling a value are reported against the
// field being read.
template <class F>
auto guarded(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ParseError) throw;
    fail(path, e.what());
  }
}

BlaschkePotapovForm read_bp(const json& doc) {
  const Side side = read_side(field(doc, "side", ""), "side");
  const std::size_t p = read_size(field(doc, "p", ""), "p");
  const std::size_t m = read_size(field(doc, "m", ""), "m");
  if (p == 0 || m == 0) fail("p", "dimensions must be positive");
  if ((side == Side::Iso && p < m) || (side == Side::Coiso && m < p)) fail("side", "does not match p, m");
  ComplexMatrix constant = read_matrix(field(doc, "constant", ""), "constant");
  expect_shape(constant, p, m, "constant");
  const std::size_t k = side == Side::Iso ? p : m;
  std::vector<BlaschkeFactor> factors;
  const json& list = read_array(field(doc, "factors", ""), "factors");
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string fpath = index("factors", i);
    const json& pj = field(list[i], "pole", fpath);
    const std::string ppath = join(fpath, "pole");
    Pole pole = Pole::infinity();
    if (pj.is_string()) {
      if (pj.get<std::string>() != "inf") fail(ppath, "expected [re, im] or \"inf\"");
    } else {
      const Complex alpha = read_complex(pj, ppath);
      pole = guarded(ppath, [&] { return Pole::finite(alpha); });
    }
    ComplexMatrix v = read_matrix(field(list[i], "v", fpath), join(fpath, "v"));
    expect_shape(v, k, 1, join(fpath, "v"));
    factors.push_back({pole, std::move(v)});
  }
  return BlaschkePotapovForm::unchecked(side, std::move(constant), std::move(factors));
}

StateSpaceRealization read_ss(const json& doc) {
  ComplexMatrix a = read_matrix(field(doc, "a", ""), "a");
  ComplexMatrix b = read_matrix(field(doc, "b", ""), "b");
  ComplexMatrix c = read_matrix(field(doc, "c", ""), "c");
  ComplexMatrix d = read_matrix(field(doc, "d", ""), "d");
  return guarded("a", [&] { return StateSpaceRealization(std::move(a), std::move(b), std::move(c), std::move(d)); });
}

MFDForm read_mfd(const json& doc) {
  MFDForm mfd;
  const std::string side = read_string(field(doc, "side", ""), "side");
  if (side == "right") {
    mfd.side = MfdSide::Right;
  } else if (side == "left") {
    mfd.side = MfdSide::Left;
  } else {
    fail("side", "expected \"right\" or \"left\"");
  }
  mfd.p = read_size(field(doc, "p", ""), "p");
  mfd.m = read_size(field(doc, "m", ""), "m");
  mfd.num = read_matrices(field(doc, "num", ""), "num");
  mfd.den = read_matrices(field(doc, "den", ""), "den");
  guarded("den", [&] {
    mfd.validate();
    return 0;
  });
  return mfd;
}

LaurentPolyForm read_laurent(const json& doc) {
  LaurentPolyForm lp;
  lp.q = read_int(field(doc, "q", ""), "q");
  lp.coeffs = read_matrices(field(doc, "coeffs", ""), "coeffs");
  guarded("coeffs", [&] {
    lp.validate();
    return 0;
  });
  return lp;
}

ParaunitaryParam read_params(const json& doc) {
  ParaunitaryParam pp;
  pp.side = read_side(field(doc, "side", ""), "side");
  pp.p = read_size(field(doc, "p", ""), "p");
  pp.m = read_size(field(doc, "m", ""), "m");
  const json& poles = read_array(field(doc, "poles", ""), "poles");
  for (std::size_t i = 0; i < poles.size(); ++i) {
    const std::string path = index("poles", i);
    const std::string kind = read_string(field(poles[i], "kind", path), join(path, "kind"));
    if (kind == "zero") {
      pp.poles.push_back(PoleParam::zero());
    } else if (kind == "inf") {
      pp.poles.push_back(PoleParam::infinity());
    } else if (kind == "polar") {
      pp.poles.push_back(PoleParam::polar(read_double(field(poles[i], "r", path), join(path, "r")),
                                          read_double(field(poles[i], "theta", path), join(path, "theta"))));
    } else {
      fail(join(path, "kind"), "expected \"zero\", \"inf\" or \"polar\"");
    }
  }
  const json& dirs = read_array(field(doc, "directions", ""), "directions");
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const std::string path = index("directions", i);
    const json& list = read_array(dirs[i], path);
    std::vector<double> angles;
    for (std::size_t k = 0; k < list.size(); ++k) angles.push_back(read_double(list[k], index(path, k)));
    pp.directions.push_back(std::move(angles));
  }
  const json& frame = read_array(field(doc, "frame", ""), "frame");
  for (std::size_t k = 0; k < frame.size(); ++k) pp.frame.push_back(read_double(frame[k], index("frame", k)));
  guarded("poles", [&] {
    pp.validate();
    return 0;
  });
  return pp;
}

SampleSet read_samples(const json& doc) {
  SampleSet s;
  s.p = read_size(field(doc, "p", ""), "p");
  s.m = read_size(field(doc, "m", ""), "m");
  const json& list = read_array(field(doc, "samples", ""), "samples");
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string path = index("samples", i);
    s.points.push_back(read_complex(field(list[i], "z", path), join(path, "z")));
    ComplexMatrix g = read_matrix(field(list[i], "value", path), join(path, "value"));
    expect_shape(g, s.p, s.m, join(path, "value"));
    s.values.push_back(std::move(g));
  }
  return s;
}

// 1-based line and column of a byte offset.
std::string locate(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

std::string_view kind_of(const Document& doc) {
  static constexpr std::string_view kinds[] = {"bp", "ss", "mfd", "laurent", "params", "samples"};
  return kinds[doc.index()];
}

namespace detail {

json document_to_json(const Document& doc) {
  return std::visit([](const auto& x) { return to_json(x); }, doc);
}

}  // namespace detail

std::string write_document(const Document& doc) { return detail::document_to_json(doc).dump(2) + "\n"; }

Document read_document(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const std::size_t byte = e.byte == 0 ? 0 : e.byte - 1;
    throw Error(ErrorCode::ParseError, locate(text, byte) + ": malformed JSON");
  }
  if (!doc.is_object()) fail("", "expected an object");
  const std::string version = read_string(field(doc, "format_version", ""), "format_version");
  if (version != kFormatVersion) fail("format_version", "unsupported version \"" + version + "\"");
  const std::string kind = read_string(field(doc, "kind", ""), "kind");
  if (kind == "bp") return read_bp(doc);
  if (kind == "ss") return read_ss(doc);
  if (kind == "mfd") return read_mfd(doc);
  if (kind == "laurent") return read_laurent(doc);
  if (kind == "params") return read_params(doc);
  if (kind == "samples") return read_samples(doc);
  fail("kind", "unknown kind \"" + kind + "\"");
}

Document load_document(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return read_document(buf.str());
  } catch (const Error& e) {
    std::string what = e.what();
    const std::string prefix = std::string(to_string(e.code())) + ": ";
    if (what.starts_with(prefix)) what.erase(0, prefix.size());
    throw Error(ErrorCode::ParseError, path.string() + ": " + what);
  }
}

void save_document(const std::filesystem::path& path, const Document& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
  out << write_document(doc);
  if (!out) throw Error(ErrorCode::InvalidArgument, "write failed: " + path.string());
}

}  // namespace paraunit::io
