#include "paraunit/cli.hpp"

#include <cerrno>
#include <cstdlib>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "json_codec.hpp"
#include "paraunit/analysis.hpp"
#include "paraunit/errors.hpp"
#include "paraunit/fit.hpp"
#include "paraunit/io.hpp"
#include "paraunit/linalg.hpp"
#include "paraunit/param.hpp"
#include "paraunit/transforms.hpp"

namespace paraunit::cli {

namespace {

using io::detail::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Settings {
  std::optional<double> tol;
  std::size_t samples = defaults::kCircleSamples;

  double pick(double fallback) const { return tol.value_or(fallback); }
};

json certificate_json(const Certificate& c) {
  json j;
  j["name"] = c.name;
  j["residual"] = c.residual;
  j["tolerance"] = c.tolerance;
  j["verdict"] = c.passed() ? "pass" : "fail";
  return j;
}

json report(const std::string& command) {
  json j;
  j["format_version"] = io::kFormatVersion;
  j["kind"] = "report";
  j["command"] = command;
  return j;
}

// Appends the certificate list and overall status; returns the exit code.
int finish(json& rep, const std::vector<Certificate>& certs, std::ostream& out) {
  json list = json::array();
  for (const auto& c : certs) list.push_back(certificate_json(c));
  rep["certificates"] = std::move(list);
  const bool ok = all_pass(certs);
  rep["status"] = ok ? "pass" : "fail";
  out << rep.dump(2) << "\n";
  return ok ? kPass : kCertificateFailed;
}

BlaschkePotapovForm validated(const BlaschkePotapovForm& f) {
  std::vector<BlaschkeFactor> factors = f.factors();
  return BlaschkePotapovForm::create(f.side(), f.constant(), std::move(factors));
}

// Any document that denotes a Blaschke-Potapov product.
std::optional<BlaschkePotapovForm> as_bp(const io::Document& doc) {
  if (const auto* bp = std::get_if<BlaschkePotapovForm>(&doc)) return validated(*bp);
  if (const auto* pp = std::get_if<ParaunitaryParam>(&doc)) return build_paraunitary(*pp);
  return std::nullopt;
}

AnyForm as_form(const io::Document& doc) {
  if (const auto* bp = std::get_if<BlaschkePotapovForm>(&doc)) return *bp;
  if (const auto* ss = std::get_if<StateSpaceRealization>(&doc)) return *ss;
  if (const auto* mfd = std::get_if<MFDForm>(&doc)) return *mfd;
  if (const auto* lp = std::get_if<LaurentPolyForm>(&doc)) return *lp;
  if (const auto* pp = std::get_if<ParaunitaryParam>(&doc)) return build_paraunitary(*pp);
  throw UsageError("a samples document does not describe a function");
}

StateSpaceRealization as_ss(const io::Document& doc) {
  if (const auto* ss = std::get_if<StateSpaceRealization>(&doc)) return *ss;
  if (const auto bp = as_bp(doc)) return bp_to_realization(*bp);
  throw UsageError(std::string("expected a bp, params or ss document, got ") + std::string(io::kind_of(doc)));
}

bool stable(const StateSpaceRealization& ss) {
  return ss.n() == 0 || (ss.n() <= linalg::kSteinSizeLimit && linalg::spectral_radius(ss.a) < 1.0 - 1e-9);
}

Side parse_side(const std::string& s, std::size_t p, std::size_t m) {
  if (s == "iso") return Side::Iso;
  if (s == "coiso") return Side::Coiso;
  if (s.empty()) return p >= m ? Side::Iso : Side::Coiso;
  throw UsageError("--side must be iso or coiso");
}

MfdSide parse_mfd_side(const std::string& s, std::size_t p, std::size_t m) {
  if (s == "right") return MfdSide::Right;
  if (s == "left") return MfdSide::Left;
  if (s.empty()) return p >= m ? MfdSide::Right : MfdSide::Left;
  throw UsageError("--mfd-side must be right or left");
}

Complex parse_point(const std::string& s) {
  std::istringstream in(s);
  double re = 0.0, im = 0.0;
  char comma = 0;
  if (!(in >> re >> comma >> im) || comma != ',' || !(in >> std::ws).eof()) {
    throw UsageError("--at expects re,im");
  }
  return {re, im};
}

// ---- commands ----------------------------------------------------------------

int cmd_check(const io::Document& doc, const Settings& s, std::ostream& out) {
  json rep = report("check");
  rep["document"] = io::kind_of(doc);
  std::vector<Certificate> certs;
  if (const auto* bp = std::get_if<BlaschkePotapovForm>(&doc)) {
    certs.push_back(circle_residual(*bp, s.samples, s.pick(defaults::kCircleTol)));
  } else if (const auto* pp = std::get_if<ParaunitaryParam>(&doc)) {
    certs.push_back(circle_residual(build_paraunitary(*pp), s.samples, s.pick(defaults::kCircleTol)));
  } else if (const auto* ss = std::get_if<StateSpaceRealization>(&doc)) {
    for (auto& c : realization_check(*ss, s.pick(defaults::kRealizationTol))) certs.push_back(std::move(c));
    if (stable(*ss)) {
      for (auto& c : gramian_certificate(*ss, s.pick(defaults::kGramianTol)).certificates) {
        certs.push_back(std::move(c));
      }
    }
  } else if (const auto* mfd = std::get_if<MFDForm>(&doc)) {
    certs.push_back(mfd_check(*mfd, s.pick(defaults::kMfdTolScale)));
  } else if (const auto* lp = std::get_if<LaurentPolyForm>(&doc)) {
    certs.push_back(laurent_check(*lp, s.pick(defaults::kLaurentTol)));
  } else {
    const auto& samples = std::get<SampleSet>(doc);
    samples.validate();
    double worst = 0.0;
    for (const auto& g : samples.values) worst = std::max(worst, unitarity_defect(g));
    certs.push_back(make_certificate("samples", worst, s.pick(defaults::kCircleTol)));
  }
  return finish(rep, certs, out);
}

int cmd_generate(const std::optional<std::string>& params_in, std::uint64_t seed, std::size_t d,
                 std::size_t p, std::size_t m, const std::string& side, bool schur,
                 const std::string& output, const std::optional<std::string>& params_out,
                 const Settings& s, std::ostream& out) {
  ParaunitaryParam params;
  if (params_in) {
    io::Document doc = io::load_document(*params_in);
    const auto* pp = std::get_if<ParaunitaryParam>(&doc);
    if (!pp) throw UsageError("--params expects a params document");
    params = *pp;
  } else {
    params = random_params(seed, parse_side(side, p, m), p, m, d, schur);
  }
  const BlaschkePotapovForm f = build_paraunitary(params);
  io::save_document(output, f);
  if (params_out) io::save_document(*params_out, params);
  json rep = report("generate");
  rep["output"] = output;
  rep["side"] = params.side == Side::Iso ? "iso" : "coiso";
  rep["p"] = params.p;
  rep["m"] = params.m;
  rep["degree"] = params.degree();
  rep["angle_count"] = param_count(params.side, params.p, params.m, params.degree()).angle_count;
  rep["schur_stable"] = f.all_poles_inside();
  return finish(rep, {circle_residual(f, s.samples, s.pick(defaults::kCircleTol))}, out);
}

int cmd_convert(const io::Document& doc, const std::string& to, const std::string& mfd_side,
                const std::string& output, std::ostream& out) {
  json rep = report("convert");
  rep["from"] = io::kind_of(doc);
  rep["to"] = to;
  rep["output"] = output;
  if (to == "ss") {
    io::save_document(output, as_ss(doc));
  } else if (to == "mfd") {
    const StateSpaceRealization ss = as_ss(doc);
    io::save_document(output, ss_to_mfd(ss, parse_mfd_side(mfd_side, ss.p(), ss.m())));
  } else if (to == "laurent") {
    const auto bp = as_bp(doc);
    if (!bp) throw UsageError("--to laurent expects a bp or params document");
    io::save_document(output, bp_to_laurent(*bp));
  } else {
    throw UsageError("--to must be ss, mfd or laurent");
  }
  return finish(rep, {}, out);
}

int cmd_embed(const io::Document& doc, const std::string& mode, const std::string& output,
              const Settings& s, std::ostream& out) {
  json rep = report("embed");
  rep["output"] = output;
  const bool allpass = mode == "allpass" || (mode.empty() && std::holds_alternative<StateSpaceRealization>(doc));
  if (allpass) {
    const auto* ss = std::get_if<StateSpaceRealization>(&doc);
    if (!ss) throw UsageError("allpass embedding expects an ss document");
    const StateSpaceRealization big = allpass_embed(*ss);
    io::save_document(output, big);
    rep["mode"] = "allpass";
    return finish(rep, realization_check(big, s.pick(defaults::kRealizationTol)), out);
  }
  if (!mode.empty() && mode != "square") throw UsageError("--mode must be allpass or square");
  const auto bp = as_bp(doc);
  if (!bp) throw UsageError("square embedding expects a bp or params document");
  const SquareEmbedding emb = embed_to_square(*bp);
  io::save_document(output, emb.square);
  rep["mode"] = "square";
  rep["constant"] = io::detail::matrix_to_json(emb.constant);
  return finish(rep, {circle_residual(emb.square, s.samples, s.pick(defaults::kCircleTol))}, out);
}

int cmd_flip(const io::Document& doc, const std::string& output, const Settings& s, std::ostream& out) {
  const auto bp = as_bp(doc);
  if (!bp) throw UsageError("flip expects a bp or params document");
  const BlaschkePotapovForm flipped = flip_poles(*bp);
  io::save_document(output, flipped);
  json rep = report("flip");
  rep["output"] = output;
  rep["degree"] = flipped.degree();
  rep["schur_stable"] = flipped.all_poles_inside();
  return finish(rep, {circle_residual(flipped, s.samples, s.pick(defaults::kCircleTol))}, out);
}

int cmd_gramians(const io::Document& doc, const Settings& s, std::ostream& out) {
  const StateSpaceRealization ss = as_ss(doc);
  const GramianReport g = gramian_certificate(ss, s.pick(defaults::kGramianTol));
  json rep = report("gramians");
  rep["w_cont"] = io::detail::matrix_to_json(g.w_cont);
  rep["w_obs"] = io::detail::matrix_to_json(g.w_obs);
  rep["mcmillan_degree"] = mcmillan_degree(ss);
  return finish(rep, g.certificates, out);
}

int cmd_eval(const io::Document& doc, const std::string& at, std::ostream& out) {
  const Complex z = parse_point(at);
  json rep = report("eval");
  rep["z"] = io::detail::complex_to_json(z);
  rep["value"] = io::detail::matrix_to_json(eval(as_form(doc), z));
  return finish(rep, {}, out);
}

int cmd_fit(const io::Document& doc, std::size_t degree, std::size_t restarts, std::uint64_t seed,
            const std::string& side, const std::optional<std::string>& output, const Settings& s,
            std::ostream& out) {
  SampleSet samples;
  if (const auto* set = std::get_if<SampleSet>(&doc)) {
    samples = *set;
  } else {
    samples = circle_samples(as_form(doc), s.samples);
  }
  const FitResult r = fit_lossless(samples, degree, samples.p, samples.m, parse_side(side, samples.p, samples.m),
                                   seed, restarts);
  if (output) io::save_document(*output, r.params);
  json rep = report("fit");
  rep["degree"] = degree;
  rep["restarts"] = restarts;
  rep["samples"] = samples.size();
  rep["objective"] = r.objective;
  rep["iterations"] = r.iterations;
  rep["converged"] = r.converged;
  if (output) rep["output"] = *output;
  const BlaschkePotapovForm f = build_paraunitary(r.params);
  return finish(rep, {circle_residual(f, s.samples, s.pick(defaults::kCircleTol))}, out);
}

std::optional<double> env_tolerance() {
  const char* raw = std::getenv("PARAUNIT_TOL");
  if (!raw || !*raw) return std::nullopt;
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(raw, &end);
  if (errno != 0 || *end != '\0' || !(v > 0.0) || !std::isfinite(v)) {
    throw UsageError(std::string("PARAUNIT_TOL is not a positive number: ") + raw);
  }
  return v;
}

}  // namespace

int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Para-unitary rational matrix functions: build, convert, certify, fit", "paraunit"};
  app.require_subcommand(1);

  std::optional<double> tol;
  std::size_t samples = defaults::kCircleSamples;
  app.add_option("--tol", tol, "Override every certificate tolerance")->check(CLI::PositiveNumber);
  app.add_option("--samples", samples, "Unit-circle sample count")->check(CLI::Range(8, 1 << 20));
  app.fallthrough();

  std::string file, output, to, mfd_side, mode, side, at;
  std::optional<std::string> params_in, params_out, fit_out;
  std::uint64_t seed = 0;
  std::size_t d = 0, p = 1, m = 1, restarts = 8;
  bool schur = false;

  auto* generate = app.add_subcommand("generate", "Random or given parameters to a bp document");
  generate->add_option("--seed", seed);
  generate->add_option("-d,--degree", d);
  generate->add_option("-p", p)->check(CLI::PositiveNumber);
  generate->add_option("-m", m)->check(CLI::PositiveNumber);
  generate->add_option("--side", side);
  generate->add_flag("--schur", schur, "Poles in the open disk only");
  generate->add_option("--params", params_in, "Read parameters instead of drawing them");
  generate->add_option("--params-out", params_out, "Also write the parameters");
  generate->add_option("-o,--output", output)->required();

  auto* check = app.add_subcommand("check", "Run every certificate applicable to a document");
  check->add_option("file", file)->required();

  auto* convert = app.add_subcommand("convert", "Convert between representations");
  convert->add_option("file", file)->required();
  convert->add_option("--to", to)->required();
  convert->add_option("--mfd-side", mfd_side);
  convert->add_option("-o,--output", output)->required();

  auto* embed = app.add_subcommand("embed", "All-pass embedding (ss) or square embedding (bp)");
  embed->add_option("file", file)->required();
  embed->add_option("--mode", mode);
  embed->add_option("-o,--output", output)->required();

  auto* flip = app.add_subcommand("flip", "Move every pole into the open disk");
  flip->add_option("file", file)->required();
  flip->add_option("-o,--output", output)->required();

  auto* gramians = app.add_subcommand("gramians", "Controllability and observability gramians");
  gramians->add_option("file", file)->required();

  auto* evaluate = app.add_subcommand("eval", "Evaluate at one point");
  evaluate->add_option("file", file)->required();
  evaluate->add_option("--at", at)->required();

  auto* fit = app.add_subcommand("fit", "Fit a Schur-stable para-unitary function to samples");
  fit->add_option("file", file)->required();
  fit->add_option("--degree", d)->required();
  fit->add_option("--restarts", restarts)->check(CLI::PositiveNumber);
  fit->add_option("--seed", seed);
  fit->add_option("--side", side);
  fit->add_option("-o,--output", fit_out);

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.emplace_back("paraunit");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageError;
  }

  try {
    Settings s;
    s.tol = tol ? tol : env_tolerance();
    s.samples = samples;
    if (generate->parsed()) {
      return cmd_generate(params_in, seed, d, p, m, side, schur, output, params_out, s, out);
    }
    const io::Document doc = io::load_document(file);
    if (check->parsed()) return cmd_check(doc, s, out);
    if (convert->parsed()) return cmd_convert(doc, to, mfd_side, output, out);
    if (embed->parsed()) return cmd_embed(doc, mode, output, s, out);
    if (flip->parsed()) return cmd_flip(doc, output, s, out);
    if (gramians->parsed()) return cmd_gramians(doc, s, out);
    if (evaluate->parsed()) return cmd_eval(doc, at, out);
    if (fit->parsed()) return cmd_fit(doc, d, restarts, seed, side, fit_out, s, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace paraunit::cli
