#include "gkt4/io.hpp"

#include <unistd.h>

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "gkt4/random.hpp"

static_assert(std::endian::native == std::endian::little, "snapshot I/O assumes a little-endian host");

namespace gkt4 {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
    throw Error(ErrorCode::ConfigError, "key '" + key + "': not a number: '" + v + "'");
  }
  return out;
}

long to_long(const std::string& key, const std::string& v) {
  long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw Error(ErrorCode::ConfigError, "key '" + key + "': not an integer: '" + v + "'");
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw Error(ErrorCode::ConfigError, "key '" + key + "': not a boolean: '" + v + "'");
}

std::array<int, 4> to_dims(const std::string& key, const std::string& v) {
  std::array<int, 4> d{};
  std::string s = v;
  std::replace(s.begin(), s.end(), 'x', ',');
  std::istringstream in(s);
  std::string part;
  int k = 0;
  while (std::getline(in, part, ',')) {
    if (k == 4) throw Error(ErrorCode::ConfigError, "key '" + key + "': expected 4 sizes");
    const long n = to_long(key, trim(part));
    if (n < 1 || n > 4096) throw Error(ErrorCode::ConfigError, "key '" + key + "': size out of range");
    d[k++] = static_cast<int>(n);
  }
  if (k != 4) throw Error(ErrorCode::ConfigError, "key '" + key + "': expected 4 sizes");
  return d;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

struct KeySpec {
  const char* key;
  const char* fallback;
  const char* doc;
  Setter set;
};

const std::vector<KeySpec>& key_table() {
  static const std::vector<KeySpec> table = {
      {"grid.dims", "32,32,1,1", "grid sizes N0,N1,N2,N3 (used by init)",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.dims = to_dims(k, v); }},
      {"diff", "spectral", "spectral | fd4",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         if (v == "spectral") c.diff = DiffRule::Spectral;
         else if (v == "fd4") c.diff = DiffRule::Central4;
         else throw Error(ErrorCode::ConfigError, "key '" + k + "': expected spectral or fd4");
       }},
      {"generator", "cos", "cos (eps cos x0) | sincos (eps sin x0 cos x1) | random (band-limited)",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         if (v == "cos" || v == "sincos" || v == "random") c.generator.family = v;
         else if (v == "random-bandlimited") c.generator.family = "random";
         else throw Error(ErrorCode::ConfigError, "key '" + k + "': unknown generator '" + v + "'");
       }},
      {"generator.amplitude", "0.1", "eps; sup norm of the generator before mean removal",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.generator.amplitude = to_double(k, v); }},
      {"generator.kmax", "2", "largest wavenumber per axis for random",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         const long n = to_long(k, v);
         if (n < 1) throw Error(ErrorCode::ConfigError, "key '" + k + "' must be >= 1");
         c.generator.kmax = static_cast<int>(n);
       }},
      {"generator.seed", "1", "seed for random",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         const long n = to_long(k, v);
         if (n < 0) throw Error(ErrorCode::ConfigError, "key '" + k + "' must be >= 0");
         c.generator.seed = static_cast<std::uint64_t>(n);
       }},
      {"deform.t_end", "0.2", "isotopy time",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.deform_t_end = to_double(k, v); }},
      {"deform.dt", "0.01", "largest isotopy step",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.deform_dt = to_double(k, v);
         if (!(c.deform_dt > 0.0)) throw Error(ErrorCode::ConfigError, "key '" + k + "' must be > 0");
       }},
      {"flow.dt_mode", "cfl", "cfl | fixed",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         if (v == "cfl") c.flow.dt_mode = DtMode::Cfl;
         else if (v == "fixed") c.flow.dt_mode = DtMode::Fixed;
         else throw Error(ErrorCode::ConfigError, "key '" + k + "': expected cfl or fixed");
       }},
      {"flow.dt", "0.001", "step for dt_mode = fixed",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.flow.dt = to_double(k, v); }},
      {"flow.cfl_safety", "0.5", "safety factor in (0, 1]",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.flow.cfl_safety = to_double(k, v); }},
      {"flow.t_end", "1", "flow time",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.flow.t_end = to_double(k, v); }},
      {"flow.stride", "1", "log a diagnostics row every this many steps",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         const long n = to_long(k, v);
         if (n < 1 || n > 1000000000L) throw Error(ErrorCode::ConfigError, "key '" + k + "' must be >= 1");
         c.flow.diagnostic_stride = static_cast<int>(n);
       }},
      {"flow.integrator", "rk4", "rk4 | euler",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         if (v == "rk4") c.flow.integrator = Integrator::RK4;
         else if (v == "euler") c.flow.integrator = Integrator::Euler;
         else throw Error(ErrorCode::ConfigError, "key '" + k + "': expected rk4 or euler");
       }},
      {"flow.eps_pos", "1e-6", "stop when the margin falls to this fraction of its initial value",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.flow.eps_pos_fraction = to_double(k, v); }},
      {"flow.heat_warn", "1e-4", "warn when the heat residual exceeds this",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.flow.heat_warn = to_double(k, v); }},
      {"flow.stop_on_converged", "true", "stop once Phi is constant to 1e-9",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.flow.stop_on_converged = to_bool(k, v); }},
      {"checkpoint_stride", "0", "write a snapshot every this many flow steps (0 = off)",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.checkpoint_stride = to_long(k, v);
         if (c.checkpoint_stride < 0) throw Error(ErrorCode::ConfigError, "key '" + k + "' must be >= 0");
       }},
      {"output.snapshot", "", "default snapshot output path",
       [](RunConfig& c, const std::string&, const std::string& v) { c.snapshot_out = v; }},
      {"output.csv", "", "default diagnostics CSV path",
       [](RunConfig& c, const std::string&, const std::string& v) { c.csv_out = v; }},
  };
  return table;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::map<std::string, int> seen;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::ConfigError, "line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(t).substr(0, eq));
    const std::string value = trim(std::string_view(t).substr(eq + 1));
    const auto& table = key_table();
    const auto it = std::find_if(table.begin(), table.end(), [&](const KeySpec& k) { return key == k.key; });
    if (it == table.end()) {
      throw Error(ErrorCode::ConfigError, "line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    if (seen.count(key)) {
      throw Error(ErrorCode::ConfigError, "line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
    seen[key] = lineno;
    it->set(c, key, value);
  }
  try {
    c.flow.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::ConfigError, e.what());
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_reference() {
  std::ostringstream out;
  for (const auto& k : key_table()) {
    out << k.key << " = " << k.fallback << "    # " << k.doc << '\n';
  }
  return out.str();
}

ScalarField make_generator(const GeneratorSpec& spec, const GridPtr& grid) {
  ScalarField f(grid);
  const std::size_t n = grid->size();
  const double eps = spec.amplitude;
  if (spec.family == "cos") {
    for (std::size_t i = 0; i < n; ++i) f(0, i) = eps * std::cos(grid->coord(i, 0));
  } else if (spec.family == "sincos") {
    for (std::size_t i = 0; i < n; ++i) f(0, i) = eps * std::sin(grid->coord(i, 0)) * std::cos(grid->coord(i, 1));
  } else if (spec.family == "random" || spec.family == "random-bandlimited") {
    Rng rng(spec.seed);
    std::array<int, 4> kmax{};
    for (int a = 0; a < 4; ++a) {
      // stay strictly below Nyquist so the field is resolved
      const int resolved = (grid->dim(a) - 1) / 2;
      kmax[a] = std::min(spec.kmax, resolved);
    }
    for (int k0 = -kmax[0]; k0 <= kmax[0]; ++k0)
      for (int k1 = -kmax[1]; k1 <= kmax[1]; ++k1)
        for (int k2 = -kmax[2]; k2 <= kmax[2]; ++k2)
          for (int k3 = 0; k3 <= kmax[3]; ++k3) {
            // one representative of each +-k pair
            const std::array<int, 4> k{k0, k1, k2, k3};
            const auto first = std::find_if(k.rbegin(), k.rend(), [](int v) { return v != 0; });
            if (first == k.rend() || *first < 0) continue;
            const double ca = rng.normal(), sa = rng.normal();
            for (std::size_t i = 0; i < n; ++i) {
              double ph = 0.0;
              for (int a = 0; a < 4; ++a) ph += k[a] * grid->coord(i, a);
              f(0, i) += ca * std::cos(ph) + sa * std::sin(ph);
            }
          }
    const double sup = f.max_abs();
    if (sup > 0.0) f *= eps / sup;
  } else {
    throw Error(ErrorCode::ConfigError, "unknown generator '" + spec.family + "'");
  }
  const double mean = grid_mean(f);
  for (double& v : f.data()) v -= mean;
  return f;
}

// ---------------------------------------------------------------------------

void write_file_atomic(const std::string& path, const std::string& bytes) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write '" + tmp.string() + "'");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error(ErrorCode::IoFailure, "write failed for '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::IoFailure, "cannot rename onto '" + path + "'");
  }
}

namespace {

class Writer {
 public:
  template <class T>
  void put(T v) {
    char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    buf_.append(b, sizeof(T));
  }
  void put_string(const std::string& s) {
    put(static_cast<std::uint32_t>(s.size()));
    buf_ += s;
  }
  template <class F>
  void put_block(const std::string& name, const F& field) {
    put_string(name);
    put(static_cast<std::uint32_t>(F::kComponents));
    const auto& d = field.data();
    buf_.append(reinterpret_cast<const char*>(d.data()), d.size() * sizeof(double));
  }
  const std::string& bytes() const { return buf_; }

 private:
  std::string buf_;
};

class Reader {
 public:
  explicit Reader(std::string bytes) : buf_(std::move(bytes)) {}
  template <class T>
  T get() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, buf_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  std::string get_string(std::uint32_t limit) {
    const auto n = get<std::uint32_t>();
    if (n > limit) throw Error(ErrorCode::FormatMismatch, "snapshot string too long");
    need(n);
    std::string s = buf_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  void get_doubles(std::span<double> out) {
    need(out.size() * sizeof(double));
    std::memcpy(out.data(), buf_.data() + pos_, out.size() * sizeof(double));
    pos_ += out.size() * sizeof(double);
  }
  bool done() const { return pos_ == buf_.size(); }

 private:
  void need(std::size_t n) const {
    if (buf_.size() - pos_ < n) throw Error(ErrorCode::FormatMismatch, "snapshot truncated");
  }
  std::string buf_;
  std::size_t pos_ = 0;
};

}  // namespace

void save_snapshot(const GKState& s, const std::string& path) {
  Writer w;
  w.put('G');
  w.put('K');
  w.put('T');
  w.put('4');
  w.put(kSnapshotVersion);
  for (int a = 0; a < 4; ++a) w.put(static_cast<std::uint32_t>(s.grid()->dim(a)));
  w.put(s.time());
  w.put_string(s.provenance());
  w.put(static_cast<std::uint32_t>(4));
  w.put_block("Omega", s.omega());
  w.put_block("Psi1", s.psi1());
  w.put_block("Psi2_base", s.psi2_base());
  w.put_block("a", s.potential());
  write_file_atomic(path, w.bytes());
}

GKState load_snapshot(const std::string& path, DiffRule rule) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot read snapshot '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::IoFailure, "read failed for '" + path + "'");
  Reader r(ss.str());
  char magic[4];
  for (char& c : magic) c = r.get<char>();
  if (std::string_view(magic, 4) != "GKT4") throw Error(ErrorCode::FormatMismatch, "bad snapshot magic");
  const auto version = r.get<std::uint32_t>();
  if (version != kSnapshotVersion) {
    throw Error(ErrorCode::FormatMismatch, "unsupported snapshot version " + std::to_string(version));
  }
  std::array<int, 4> dims{};
  for (int& d : dims) {
    const auto v = r.get<std::uint32_t>();
    if (v < 1 || v > 4096) throw Error(ErrorCode::FormatMismatch, "snapshot dims out of range");
    d = static_cast<int>(v);
  }
  const double t = r.get<double>();
  std::string provenance = r.get_string(1u << 20);
  const auto blocks = r.get<std::uint32_t>();
  const GridPtr grid = make_grid(dims, rule);
  TwoFormField omega(grid), psi1(grid), psi2(grid);
  OneFormField a(grid);
  int found = 0;
  for (std::uint32_t k = 0; k < blocks; ++k) {
    const std::string name = r.get_string(256);
    const auto ncomp = r.get<std::uint32_t>();
    auto read = [&](auto& field, int bit) {
      using F = std::decay_t<decltype(field)>;
      if (ncomp != F::kComponents) {
        throw Error(ErrorCode::DimsMismatch, "block '" + name + "' has " + std::to_string(ncomp) + " components");
      }
      if (found & bit) throw Error(ErrorCode::FormatMismatch, "duplicate block '" + name + "'");
      r.get_doubles(field.data());
      found |= bit;
    };
    if (name == "Omega") read(omega, 1);
    else if (name == "Psi1") read(psi1, 2);
    else if (name == "Psi2_base") read(psi2, 4);
    else if (name == "a") read(a, 8);
    else throw Error(ErrorCode::FormatMismatch, "unknown block '" + name + "'");
  }
  if (found != 15) throw Error(ErrorCode::FormatMismatch, "snapshot is missing field blocks");
  if (!r.done()) throw Error(ErrorCode::FormatMismatch, "trailing bytes in snapshot");
  return GKState::assemble(std::move(omega), std::move(psi1), std::move(psi2), std::move(a))
      .at_time(t)
      .with_provenance(std::move(provenance));
}

// ---------------------------------------------------------------------------

std::string diagnostics_csv(const FlowTrace& trace) {
  std::string out = kCsvHeader;
  out += '\n';
  char num[40];
  for (const auto& r : trace.rows) {
    const double v[] = {r.t,          r.lambda,     r.sup_phi_dev, r.sup_grad_phi_sq,
                        r.F_value,    r.dF_dt,      r.energy_rhs,  r.mu_l2,
                        r.torsion_l2, r.pos_margin, r.heat_residual};
    for (std::size_t k = 0; k < std::size(v); ++k) {
      std::snprintf(num, sizeof num, "%.17g", v[k]);
      if (k) out += ',';
      out += num;
    }
    out += '\n';
  }
  return out;
}

void write_diagnostics_csv(const FlowTrace& trace, const std::string& path) {
  write_file_atomic(path, diagnostics_csv(trace));
}

FlowTrace read_diagnostics_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot read '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || trim(line) != kCsvHeader) {
    throw Error(ErrorCode::FormatMismatch, "'" + path + "' does not start with the diagnostics header");
  }
  FlowTrace trace;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    std::array<double, 11> v{};
    std::istringstream cells(line);
    std::string cell;
    std::size_t k = 0;
    while (std::getline(cells, cell, ',')) {
      if (k == v.size()) throw Error(ErrorCode::FormatMismatch, "too many columns on line " + std::to_string(lineno));
      char* end = nullptr;
      v[k] = std::strtod(cell.c_str(), &end);
      if (cell.empty() || *end != '\0') {
        throw Error(ErrorCode::FormatMismatch, "bad number on line " + std::to_string(lineno));
      }
      ++k;
    }
    if (k != v.size()) throw Error(ErrorCode::FormatMismatch, "too few columns on line " + std::to_string(lineno));
    trace.rows.push_back({v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9], v[10]});
  }
  return trace;
}

}  // namespace gkt4
