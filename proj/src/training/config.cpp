#include "mvx/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "mvx/error.hpp"

namespace mvx {
namespace {

[[noreturn]] void fail(const std::string& key, const std::string& msg) { throw ConfigError(key + ": " + msg); }

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool is_int_literal(const std::string& v) {
  std::size_t i = (v.size() > 0 && (v[0] == '+' || v[0] == '-')) ? 1 : 0;
  if (i == v.size()) return false;
  for (; i < v.size(); ++i) {
    if (v[i] < '0' || v[i] > '9') return false;
  }
  return true;
}

// A literal the schema would read as a Python float: has '.', an exponent, or is inf/nan.
bool is_float_literal(const std::string& v) {
  if (is_int_literal(v)) return false;
  double x;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  return r.ec == std::errc() && r.ptr == v.data() + v.size();
}

double to_double(const std::string& v) {
  double x = 0;
  std::from_chars(v.data(), v.data() + v.size(), x);
  return x;
}

long long parse_int(const std::string& key, const std::string& v) {
  if (!is_int_literal(v)) fail(key, "expected an integer, got '" + v + "'");
  long long x = 0;
  const char* begin = v.data() + (v[0] == '+' ? 1 : 0);
  const auto r = std::from_chars(begin, v.data() + v.size(), x);
  if (r.ec != std::errc()) fail(key, "integer out of range: '" + v + "'");
  return x;
}

std::size_t parse_count(const std::string& key, const std::string& v, long long min) {
  const long long x = parse_int(key, v);
  if (x < min) fail(key, "must be >= " + std::to_string(min) + ", got " + v);
  return static_cast<std::size_t>(x);
}

double parse_float(const std::string& key, const std::string& v) {
  if (!is_float_literal(v)) fail(key, "expected a float, got '" + v + "'");
  return to_double(v);
}

// Int or float, as in Or(int, float).
double parse_number(const std::string& key, const std::string& v) {
  if (is_int_literal(v)) return static_cast<double>(parse_int(key, v));
  return parse_float(key, v);
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "True") return true;
  if (v == "false" || v == "False") return false;
  fail(key, "expected a bool (true/false), got '" + v + "'");
}

std::vector<std::string> parse_list(const std::string& key, const std::string& v) {
  if (v.size() < 2 || v.front() != '[' || v.back() != ']') fail(key, "expected a list like [a, b], got '" + v + "'");
  std::vector<std::string> out;
  const std::string body = trim(std::string_view(v).substr(1, v.size() - 2));
  if (body.empty()) return out;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) fail(key, "empty list element in '" + v + "'");
    out.push_back(item);
  }
  return out;
}

std::vector<std::size_t> parse_count_list(const std::string& key, const std::string& v, long long min) {
  std::vector<std::size_t> out;
  for (const auto& s : parse_list(key, v)) out.push_back(parse_count(key, s, min));
  return out;
}

std::vector<double> parse_number_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& s : parse_list(key, v)) out.push_back(parse_number(key, s));
  return out;
}

std::string render_float(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  std::string s(buf, r.ptr);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

template <class T, class F>
std::string render_list(const std::vector<T>& xs, F f) {
  std::string s = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ", ";
    s += f(xs[i]);
  }
  return s + "]";
}

void set_net_key(NetPatch& p, const std::string& full, const std::string& field, const std::string& v, bool decoder) {
  if (field == "hidden_layer_dim") {
    p.hidden = parse_count_list(full, v, 1);
  } else if (field == "non_linear") {
    p.non_linear = parse_bool(full, v);
  } else if (field == "bias") {
    p.bias = parse_bool(full, v);
  } else if (field == "activation") {
    try {
      p.activation = parse_activation(v);
    } catch (const DomainError&) {
      fail(full, "unknown activation '" + v + "' (relu, tanh, sigmoid)");
    }
  } else if (decoder && field == "dist") {
    try {
      p.dist = parse_likelihood_kind(v);
    } catch (const DomainError&) {
      fail(full, "unknown distribution '" + v + "' (Normal, Bernoulli, Laplace, Categorical, Default)");
    }
  } else if (decoder && field == "scale") {
    const double s = parse_number(full, v);
    if (!(s > 0)) fail(full, "must be > 0, got " + v);
    p.scale = s;
  } else {
    fail(full, "unknown key");
  }
}

void set_model_key(ModelConfig& c, const std::string& full, const std::string& k, const std::string& v) {
  if (k == "name") {
    c.kind = parse_model_name(v);
  } else if (k == "z_dim") {
    c.z_dim = parse_count(full, v, 1);
  } else if (k == "s_dim") {
    c.s_dim = parse_count(full, v, 1);
  } else if (k == "learning_rate") {
    const double x = parse_float(full, v);
    if (!(x > 0 && x < 1)) fail(full, "must satisfy 0 < x < 1, got " + v);
    c.learning_rate = x;
  } else if (k == "seed") {
    const long long x = parse_int(full, v);
    if (x < 0 || x > 4294967295LL) fail(full, "must satisfy 0 <= x <= 4294967295, got " + v);
    c.seed = static_cast<std::uint64_t>(x);
  } else if (k == "save_model") {
    c.save_model = parse_bool(full, v);
  } else if (k == "seed_everything") {
    c.seed_everything = parse_bool(full, v);
  } else if (k == "sparse") {
    c.sparse = parse_bool(full, v);
  } else if (k == "threshold") {
    const double x = parse_number(full, v);
    const bool zero = x == 0.0;
    if (!zero && !(is_float_literal(v) && x > 0 && x < 1)) fail(full, "must be a float with 0 < x < 1, or 0, got " + v);
    c.threshold = x;
  } else if (k == "eps") {
    const double x = parse_float(full, v);
    if (!(x > 0 && x <= 1e-10)) fail(full, "must satisfy 0 < x <= 1e-10, got " + v);
    c.eps = x;
  } else if (k == "beta") {
    const double x = parse_number(full, v);
    if (!(x > 0)) fail(full, "must be > 0, got " + v);
    c.beta = x;
  } else if (k == "K") {
    c.K = parse_count(full, v, 1);
  } else if (k == "alpha") {
    const double x = parse_number(full, v);
    if (!(x > 0)) fail(full, "must be > 0, got " + v);
    c.alpha = x;
  } else if (k == "private") {
    c.private_latents = parse_bool(full, v);
  } else if (k == "join_type") {
    if (v == "PoE") {
      c.join_type = JoinType::PoE;
    } else if (v == "Mean") {
      c.join_type = JoinType::Mean;
    } else {
      throw ConfigError("model.join_type: unsupported or invalid join type");
    }
  } else if (k == "lambda") {
    c.lambda = parse_number_list(full, v);
  } else if (k == "pi") {
    c.pi = parse_number_list(full, v);
  } else if (k == "ridge") {
    const double x = parse_number(full, v);
    if (!(x >= 0)) fail(full, "must be >= 0, got " + v);
    c.ridge = x;
  } else if (k == "clip") {
    const double x = parse_number(full, v);
    if (!(x > 0)) fail(full, "must be > 0, got " + v);
    c.clip = x;
  } else if (k == "critic_steps") {
    c.critic_steps = parse_count(full, v, 1);
  } else if (k == "non_saturating") {
    c.non_saturating = parse_bool(full, v);
  } else if (k == "subset_sampling") {
    c.subset_sampling = parse_bool(full, v);
  } else if (k == "disc_hidden_layer_dim") {
    c.disc_hidden = parse_count_list(full, v, 1);
  } else {
    fail(full, "unknown key");
  }
}

void set_trainer_key(TrainerConfig& t, const std::string& full, const std::string& k, const std::string& v) {
  if (k == "max_epochs") {
    t.max_epochs = parse_count(full, v, 0);
  } else if (k == "batch_size") {
    t.batch_size = parse_count(full, v, 1);
  } else if (k == "full_batch") {
    t.full_batch = parse_bool(full, v);
  } else {
    fail(full, "unknown key");
  }
}

// "enc3" -> 3 for prefix "enc".
std::optional<std::size_t> view_block(const std::string& block, const char* prefix) {
  const std::string p(prefix);
  if (block.rfind(p, 0) != 0 || block.size() == p.size()) return std::nullopt;
  const std::string digits = block.substr(p.size());
  if (!is_int_literal(digits) || digits[0] == '+' || digits[0] == '-') return std::nullopt;
  return static_cast<std::size_t>(std::stoull(digits));
}

void set_key(ModelConfig& c, const std::string& full, const std::string& v) {
  const auto dot = full.find('.');
  if (dot == std::string::npos) fail(full, "expected section.key");
  const std::string section = full.substr(0, dot);
  const std::string rest = full.substr(dot + 1);
  if (section == "model") return set_model_key(c, full, rest, v);
  if (section == "trainer") return set_trainer_key(c.trainer, full, rest, v);
  if (section == "encoder" || section == "decoder") {
    const bool dec = section == "decoder";
    const auto dot2 = rest.find('.');
    if (dot2 == std::string::npos) fail(full, "expected " + section + ".<default|" + (dec ? "dec" : "enc") + "<m>>.<key>");
    const std::string block = rest.substr(0, dot2);
    const std::string field = rest.substr(dot2 + 1);
    NetPatch* p = nullptr;
    if (block == "default") {
      p = dec ? &c.decoder_default : &c.encoder_default;
    } else if (auto m = view_block(block, dec ? "dec" : "enc")) {
      p = dec ? &c.decoder_views[*m] : &c.encoder_views[*m];
    } else {
      fail(section + "." + block, "unknown block (expected default or " + std::string(dec ? "dec" : "enc") + "<m>)");
    }
    return set_net_key(*p, full, field, v, dec);
  }
  fail(section, "unknown section");
}

void check_combinations(const ModelConfig& c) {
  if (c.sparse && c.kind != ModelKind::mcVAE) fail("model.sparse", "only supported by mcVAE");
  if (c.private_latents && c.kind != ModelKind::DVCCA) fail("model.private", "only supported by DVCCA");
  if (c.threshold != 0.0 && !c.sparse) fail("model.threshold", "requires model.sparse = true");
  if (c.alpha && c.kind == ModelKind::MVTCAE && *c.alpha > 1) fail("model.alpha", "must lie in (0, 1] for MVTCAE");
  if (c.join_type) {
    if (c.kind == ModelKind::DCCAE || c.kind == ModelKind::DVCCA || has_builtin_joint(c.kind)) {
      throw ConfigError("model.join_type: unsupported or invalid join type");
    }
    if (!is_variational(c.kind) && *c.join_type == JoinType::PoE) {
      throw ConfigError("model.join_type: unsupported or invalid join type");
    }
  }
  for (double l : c.lambda) {
    if (!(l >= 0)) fail("model.lambda", "values must be >= 0");
  }
  if (!c.pi.empty()) {
    double total = 0;
    for (double p : c.pi) {
      if (!(p >= 0)) fail("model.pi", "weights must be >= 0");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-6) fail("model.pi", "weights must sum to 1");
  }
}

}  // namespace

NetSpec default_net(ModelKind kind, bool decoder) {
  NetSpec s;
  s.hidden = {64};
  if (decoder && !is_variational(kind)) s.dist = LikelihoodKind::Default;
  return s;
}

NetSpec NetPatch::apply(NetSpec base) const {
  if (hidden) base.hidden = *hidden;
  if (non_linear) base.non_linear = *non_linear;
  if (bias) base.bias = *bias;
  if (activation) base.activation = *activation;
  if (dist) base.dist = *dist;
  if (scale) base.scale = *scale;
  return base;
}

ModelConfig parse_config(std::string_view text, std::string_view origin) {
  ModelConfig c;
  std::set<std::string> seen;
  bool has_name = false;
  std::istringstream is{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(std::string(origin) + ":" + std::to_string(lineno) + ": expected 'section.key = value'");
    }
    const std::string key = trim(std::string_view(t).substr(0, eq));
    const std::string value = trim(std::string_view(t).substr(eq + 1));
    if (key.empty()) throw ConfigError(std::string(origin) + ":" + std::to_string(lineno) + ": missing key");
    if (value.empty()) fail(key, "missing value");
    if (!seen.insert(key).second) fail(key, "duplicate key");
    if (key == "model.name") has_name = true;
    set_key(c, key, value);
  }
  if (!has_name) fail("model.name", "required");
  check_combinations(c);
  return c;
}

ModelConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open config " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str(), path.string());
}

double default_beta(ModelKind) { return 1.0; }

double default_alpha(ModelKind kind) {
  switch (kind) {
    case ModelKind::JMVAE: return 0.1;
    case ModelKind::MVTCAE: return 0.5;
    default: return 0.0;
  }
}

ModelSpec resolve_spec(const ModelConfig& cfg, const std::vector<std::size_t>& view_dims) {
  const std::size_t M = view_dims.size();
  for (const auto& [m, p] : cfg.encoder_views) {
    if (m >= M) fail("encoder.enc" + std::to_string(m), "data has only " + std::to_string(M) + " views");
  }
  for (const auto& [m, p] : cfg.decoder_views) {
    if (m >= M) fail("decoder.dec" + std::to_string(m), "data has only " + std::to_string(M) + " views");
  }
  ModelSpec s;
  s.kind = cfg.kind;
  s.view_dims = view_dims;
  s.z_dim = cfg.z_dim;
  s.s_dim = cfg.s_dim.value_or(cfg.z_dim);
  const NetSpec enc = cfg.encoder_default.apply(default_net(cfg.kind, false));
  const NetSpec dec = cfg.decoder_default.apply(default_net(cfg.kind, true));
  for (std::size_t m = 0; m < M; ++m) {
    auto e = cfg.encoder_views.find(m);
    s.encoders.push_back(e == cfg.encoder_views.end() ? enc : e->second.apply(enc));
    auto d = cfg.decoder_views.find(m);
    s.decoders.push_back(d == cfg.decoder_views.end() ? dec : d->second.apply(dec));
  }
  s.disc_hidden = cfg.disc_hidden;
  Hyper& h = s.hyper;
  h.beta = cfg.beta.value_or(default_beta(cfg.kind));
  h.alpha = cfg.alpha.value_or(default_alpha(cfg.kind));
  h.lambda = cfg.lambda;
  h.K = cfg.K;
  h.pi = cfg.pi;
  h.ridge = cfg.ridge;
  h.clip = cfg.clip;
  h.critic_steps = cfg.critic_steps;
  h.non_saturating = cfg.non_saturating;
  h.subset_sampling = cfg.subset_sampling;
  h.sparse = cfg.sparse;
  h.threshold = cfg.threshold;
  h.eps = cfg.eps;
  h.private_latents = cfg.private_latents;
  h.join_type = cfg.join_type;
  s.seed = cfg.seed_or_zero();
  s.validate();
  return s;
}

std::string render_config(const ModelConfig& c) {
  std::ostringstream os;
  auto b = [](bool x) { return x ? "true" : "false"; };
  auto count = [](std::size_t x) { return std::to_string(x); };
  os << "model.name = " << model_name(c.kind) << "\n";
  os << "model.z_dim = " << c.z_dim << "\n";
  os << "model.s_dim = " << c.s_dim.value_or(c.z_dim) << "\n";
  os << "model.learning_rate = " << render_float(c.learning_rate) << "\n";
  os << "model.seed = " << c.seed_or_zero() << "\n";
  os << "model.save_model = " << b(c.save_model) << "\n";
  os << "model.seed_everything = " << b(c.seed_everything) << "\n";
  os << "model.sparse = " << b(c.sparse) << "\n";
  os << "model.threshold = " << (c.threshold == 0.0 ? std::string("0") : render_float(c.threshold)) << "\n";
  os << "model.eps = " << render_float(c.eps) << "\n";
  os << "model.beta = " << render_float(c.beta.value_or(default_beta(c.kind))) << "\n";
  const double alpha = c.alpha.value_or(default_alpha(c.kind));
  if (alpha > 0) os << "model.alpha = " << render_float(alpha) << "\n";
  os << "model.K = " << c.K << "\n";
  os << "model.private = " << b(c.private_latents) << "\n";
  if (c.join_type) os << "model.join_type = " << (*c.join_type == JoinType::PoE ? "PoE" : "Mean") << "\n";
  if (!c.lambda.empty()) os << "model.lambda = " << render_list(c.lambda, render_float) << "\n";
  if (!c.pi.empty()) os << "model.pi = " << render_list(c.pi, render_float) << "\n";
  os << "model.ridge = " << render_float(c.ridge) << "\n";
  os << "model.clip = " << render_float(c.clip) << "\n";
  os << "model.critic_steps = " << c.critic_steps << "\n";
  os << "model.non_saturating = " << b(c.non_saturating) << "\n";
  os << "model.subset_sampling = " << b(c.subset_sampling) << "\n";
  os << "model.disc_hidden_layer_dim = " << render_list(c.disc_hidden, count) << "\n";

  auto net = [&](const std::string& prefix, const NetPatch& p, bool decoder) {
    if (p.hidden) os << prefix << ".hidden_layer_dim = " << render_list(*p.hidden, count) << "\n";
    if (p.non_linear) os << prefix << ".non_linear = " << b(*p.non_linear) << "\n";
    if (p.bias) os << prefix << ".bias = " << b(*p.bias) << "\n";
    if (p.activation) os << prefix << ".activation = " << activation_name(*p.activation) << "\n";
    if (decoder && p.dist) os << prefix << ".dist = " << likelihood_kind_name(*p.dist) << "\n";
    if (decoder && p.scale) os << prefix << ".scale = " << render_float(*p.scale) << "\n";
  };
  // Defaults are spelled out in full so the snapshot does not depend on built-in values.
  auto full = [&](const NetPatch& p, bool decoder) {
    const NetSpec s = p.apply(default_net(c.kind, decoder));
    NetPatch out;
    out.hidden = s.hidden;
    out.non_linear = s.non_linear;
    out.bias = s.bias;
    out.activation = s.activation;
    out.dist = s.dist;
    out.scale = s.scale;
    return out;
  };
  net("encoder.default", full(c.encoder_default, false), false);
  for (const auto& [m, p] : c.encoder_views) net("encoder.enc" + std::to_string(m), p, false);
  net("decoder.default", full(c.decoder_default, true), true);
  for (const auto& [m, p] : c.decoder_views) net("decoder.dec" + std::to_string(m), p, true);

  os << "trainer.max_epochs = " << c.trainer.max_epochs << "\n";
  os << "trainer.batch_size = " << c.trainer.batch_size << "\n";
  os << "trainer.full_batch = " << b(c.trainer.full_batch) << "\n";
  return os.str();
}

}  // namespace mvx
