#include "racert/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace racert {
namespace {

constexpr char kMagic[4] = {'R', 'A', 'V', 'F'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("field container: truncated file");
  return v;
}

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Vec vec_from_json(const Json& j) {
  Vec v(static_cast<int>(j.size()));
  int i = 0;
  for (const auto& x : j) v[i++] = x.get<double>();
  return v;
}

Json vec_to_json(const Vec& v) {
  Json j = Json::array();
  for (int i = 0; i < v.size(); ++i) j.push_back(v[i]);
  return j;
}

Mat mat_from_json(const Json& j) {
  const int rows = static_cast<int>(j.size());
  if (rows == 0) throw std::invalid_argument("matrix: empty");
  const int cols = static_cast<int>(j[0].size());
  Mat m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (static_cast<int>(j[r].size()) != cols)
      throw std::invalid_argument("matrix: ragged rows");
    for (int c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
  }
  return m;
}

double spectral_norm(const Mat& m) {
  return m.jacobiSvd().singularValues()(0);
}

BoundedSet set_from_json(const Json& j) {
  if (j.contains("box"))
    return BoundedSet::box(vec_from_json(j["box"]["lo"]), vec_from_json(j["box"]["hi"]));
  if (j.contains("ball"))
    return BoundedSet::ball(vec_from_json(j["ball"]["center"]),
                            j["ball"]["radius"].get<double>());
  throw std::invalid_argument("set: expected 'box' or 'ball'");
}

SystemModel custom_linear_from_json(const Json& j) {
  SystemModel m;
  m.name = j.value("name", std::string("custom"));
  const Mat A = mat_from_json(j.at("A"));
  const Mat B = mat_from_json(j.at("B"));
  const Mat D = mat_from_json(j.at("D"));
  m.n = static_cast<int>(A.rows());
  m.m_u = static_cast<int>(B.cols());
  m.m_d = static_cast<int>(D.cols());
  if (A.cols() != m.n || B.rows() != m.n || D.rows() != m.n)
    throw std::invalid_argument("custom_linear: inconsistent matrix shapes");
  Vec offset = Vec::Zero(m.n);
  if (j.contains("c")) offset = vec_from_json(j["c"]);
  m.dynamics = [A, B, D, offset](const Vec& x, const Vec& u, const Vec& d) {
    return Vec(A * x + B * u + D * d + offset);
  };
  m.control_set = set_from_json(j.at("control"));
  m.disturbance_set = set_from_json(j.at("disturbance"));
  if (m.control_set.dim() != m.m_u || m.disturbance_set.dim() != m.m_d)
    throw std::invalid_argument("custom_linear: set dimensions do not match B/D");
  m.eps_d = m.disturbance_set.max_norm();
  m.lip_fx = spectral_norm(A);
  m.lip_fd = spectral_norm(D);

  const double bound = j.value("clamp", 10.0);
  auto affine_min = [bound](std::vector<Halfspace> terms) {
    return [terms = std::move(terms), bound](const Vec& x) {
      double v = std::numeric_limits<double>::infinity();
      for (const auto& h : terms) v = std::min(v, h.p.dot(x) - h.k);
      return std::min(std::max(v, -bound), bound);
    };
  };
  auto parse_terms = [&](const Json& arr) {
    std::vector<Halfspace> terms;
    for (const auto& t : arr)
      terms.push_back({vec_from_json(t.at("p")), t.at("k").get<double>()});
    if (terms.empty()) throw std::invalid_argument("custom_linear: empty affine list");
    return terms;
  };
  auto max_norm_of = [](const std::vector<Halfspace>& terms) {
    double l = 0.0;
    for (const auto& h : terms) l = std::max(l, h.p.norm());
    return l;
  };

  auto reward_terms = parse_terms(j.at("reward_affine"));
  auto constraint_terms = parse_terms(j.at("constraint_affine"));
  m.reward = ScalarFn(affine_min(reward_terms), max_norm_of(reward_terms), bound);
  m.constraint =
      ScalarFn(affine_min(constraint_terms), max_norm_of(constraint_terms), bound);
  m.surrogate_target.halfspaces = reward_terms;
  for (const auto& h : constraint_terms) {
    QuadraticForm q;
    q.Q = Mat::Zero(m.n, m.n);
    q.q = h.p;
    q.b = -h.k;
    m.surrogate_constraint.quadratics.push_back(std::move(q));
  }
  return m;
}

}  // namespace

void save_field(const ValueField& field, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("save_field: cannot open " + path.string());
  os.write(kMagic, 4);
  put(os, kVersion);
  put(os, static_cast<std::uint32_t>(field.grid.dim()));
  for (const auto& ax : field.grid.axes()) {
    put(os, ax.lo);
    put(os, ax.hi);
    put(os, static_cast<std::uint64_t>(ax.count));
  }
  put(os, field.gamma);
  put(os, static_cast<std::uint8_t>(field.mode));
  put(os, field.bound);
  put(os, static_cast<std::uint32_t>(field.stats.iterations));
  put(os, field.stats.residual);
  put(os, static_cast<std::uint8_t>(field.stats.converged ? 1 : 0));
  put(os, static_cast<std::uint32_t>(field.stats.last_mask_change));
  os.write(reinterpret_cast<const char*>(field.values.data()),
           static_cast<std::streamsize>(field.values.size() * sizeof(double)));
  if (!os) throw std::runtime_error("save_field: write failed");
}

ValueField load_field(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("load_field: cannot open " + path.string());
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("load_field: bad magic");
  if (get<std::uint32_t>(is) != kVersion)
    throw std::runtime_error("load_field: unsupported version");
  const auto dims = get<std::uint32_t>(is);
  std::vector<GridAxis> axes(dims);
  for (auto& ax : axes) {
    ax.lo = get<double>(is);
    ax.hi = get<double>(is);
    ax.count = static_cast<int>(get<std::uint64_t>(is));
  }
  ValueField field;
  field.grid = Grid(std::move(axes));
  field.gamma = get<double>(is);
  field.mode = static_cast<Mode>(get<std::uint8_t>(is));
  field.bound = get<double>(is);
  field.stats.iterations = static_cast<int>(get<std::uint32_t>(is));
  field.stats.residual = get<double>(is);
  field.stats.converged = get<std::uint8_t>(is) != 0;
  field.stats.last_mask_change = static_cast<int>(get<std::uint32_t>(is));
  field.values.resize(field.grid.size());
  is.read(reinterpret_cast<char*>(field.values.data()),
          static_cast<std::streamsize>(field.values.size() * sizeof(double)));
  if (!is) throw std::runtime_error("load_field: truncated payload");
  return field;
}

void export_field_csv(const ValueField& field, const std::filesystem::path& path) {
  std::ostringstream os;
  const int n = field.grid.dim();
  for (int i = 0; i < n; ++i) os << "x" << i << ",";
  os << "value\n";
  for (std::size_t flat = 0; flat < field.grid.size(); ++flat) {
    const Vec x = field.grid.node(flat);
    for (int i = 0; i < n; ++i) os << fmt_double(x[i]) << ",";
    os << fmt_double(field.values[flat]) << "\n";
  }
  write_text_atomic(path, os.str());
}

void export_policy_csv(const Grid& grid, const Policy& policy,
                       const std::filesystem::path& path) {
  std::ostringstream os;
  const int n = grid.dim();
  const int m = static_cast<int>(policy(grid.node(0)).size());
  for (int i = 0; i < n; ++i) os << "x" << i << ",";
  for (int i = 0; i < m; ++i) os << "u" << i << (i + 1 == m ? "\n" : ",");
  for (std::size_t flat = 0; flat < grid.size(); ++flat) {
    const Vec x = grid.node(flat);
    const Vec u = policy(x);
    for (int i = 0; i < n; ++i) os << fmt_double(x[i]) << ",";
    for (int i = 0; i < m; ++i) os << fmt_double(u[i]) << (i + 1 == m ? "\n" : ",");
  }
  write_text_atomic(path, os.str());
}

Json cert_report_to_json(const CertReport& rep) {
  Json j;
  j["center"] = vec_to_json(rep.center);
  j["eps_x"] = rep.eps_x;
  j["horizon"] = rep.horizon;
  j["gamma"] = rep.gamma;
  j["method"] = to_string(rep.method);
  if (rep.lipschitz_value) {
    j["lipschitz"]["value"] = *rep.lipschitz_value;
    j["lipschitz"]["certified"] = rep.certified(CertMethod::lipschitz);
    j["lipschitz"]["reward_lb"] = rep.lipschitz_bounds->reward_lb;
    j["lipschitz"]["constraint_lb"] = rep.lipschitz_bounds->constraint_lb;
  }
  if (rep.socp_value) {
    j["socp"]["value"] = *rep.socp_value;
    j["socp"]["certified"] = rep.certified(CertMethod::socp);
    j["socp"]["reward_lb"] = rep.socp_bounds->reward_lb;
    j["socp"]["constraint_lb"] = rep.socp_bounds->constraint_lb;
  }
  Json controls = Json::array();
  for (const auto& u : rep.certified_controls) controls.push_back(vec_to_json(u));
  j["certified_controls"] = controls;
  Json states = Json::array();
  for (const auto& x : rep.tube.nominal_states) states.push_back(vec_to_json(x));
  j["tube"]["nominal_states"] = states;
  j["tube"]["radii"] = rep.tube.radii;
  j["tube"]["eps_d"] = rep.tube.eps_d;
  return j;
}

Json certified_set_to_json(const CertifiedSet& set) {
  Json j;
  j["eps_x"] = set.eps_x;
  j["horizon"] = set.horizon;
  j["gamma"] = set.gamma;
  j["method"] = to_string(set.method);
  j["region_lo"] = vec_to_json(set.region_lo);
  j["region_hi"] = vec_to_json(set.region_hi);
  j["spacing"] = set.spacing;
  j["centers_examined"] = set.centers_examined;
  Json members = Json::array();
  for (const auto& rep : set.members) members.push_back(cert_report_to_json(rep));
  j["members"] = members;
  return j;
}

CertifiedSet certified_set_from_json(const Json& j) {
  CertifiedSet set;
  set.eps_x = j.at("eps_x").get<double>();
  set.horizon = j.at("horizon").get<int>();
  set.gamma = j.at("gamma").get<double>();
  set.method = cert_method_from_string(j.at("method").get<std::string>());
  set.region_lo = vec_from_json(j.at("region_lo"));
  set.region_hi = vec_from_json(j.at("region_hi"));
  set.spacing = j.at("spacing").get<double>();
  set.centers_examined = j.at("centers_examined").get<std::size_t>();
  for (const auto& mj : j.at("members")) {
    CertReport rep;
    rep.center = vec_from_json(mj.at("center"));
    rep.eps_x = mj.at("eps_x").get<double>();
    rep.horizon = mj.at("horizon").get<int>();
    rep.gamma = mj.at("gamma").get<double>();
    rep.method = cert_method_from_string(mj.at("method").get<std::string>());
    if (mj.contains("lipschitz")) {
      rep.lipschitz_value = mj["lipschitz"]["value"].get<double>();
      StageBounds sb;
      sb.reward_lb = mj["lipschitz"]["reward_lb"].get<std::vector<double>>();
      sb.constraint_lb = mj["lipschitz"]["constraint_lb"].get<std::vector<double>>();
      rep.lipschitz_bounds = std::move(sb);
    }
    if (mj.contains("socp")) {
      rep.socp_value = mj["socp"]["value"].get<double>();
      StageBounds sb;
      sb.reward_lb = mj["socp"]["reward_lb"].get<std::vector<double>>();
      sb.constraint_lb = mj["socp"]["constraint_lb"].get<std::vector<double>>();
      rep.socp_bounds = std::move(sb);
    }
    for (const auto& uj : mj.at("certified_controls"))
      rep.certified_controls.push_back(vec_from_json(uj));
    for (const auto& xj : mj["tube"]["nominal_states"])
      rep.tube.nominal_states.push_back(vec_from_json(xj));
    rep.tube.radii = mj["tube"]["radii"].get<std::vector<double>>();
    rep.tube.eps_d = mj["tube"]["eps_d"].get<double>();
    rep.tube.eps_x = rep.eps_x;
    rep.tube.horizon = rep.horizon;
    rep.tube.nominal_controls = rep.certified_controls;
    set.members.push_back(std::move(rep));
  }
  return set;
}

Json success_report_to_json(const SuccessReport& rep) {
  Json j;
  j["trials"] = rep.trials;
  j["successes"] = rep.successes;
  j["success_rate"] = rep.success_rate;
  j["failures_constraint"] = rep.failures_constraint;
  j["failures_never"] = rep.failures_never;
  j["first_entry"] = rep.first_entry;
  return j;
}

Json sweep_to_json(const std::vector<GammaSweepRow>& rows) {
  Json arr = Json::array();
  for (const auto& row : rows) {
    Json j;
    j["gamma"] = row.gamma;
    j["iterations"] = row.iterations;
    j["converged"] = row.converged;
    j["super_zero_volume"] = row.super_zero_volume;
    j["lipschitz_volume"] = row.lipschitz_volume;
    j["socp_volume"] = row.socp_volume;
    j["certified_lipschitz"] = row.certified_lipschitz;
    j["certified_socp"] = row.certified_socp;
    j["centers_examined"] = row.centers_examined;
    j["mean_reach_time"] = row.reach.mean_time;
    j["reached"] = row.reach.reached;
    j["never_reached"] = row.reach.never_reached;
    arr.push_back(j);
  }
  return Json{{"rows", arr}};
}

Json latency_to_json(const LatencyReport& rep) {
  Json j;
  j["samples"] = rep.lipschitz_seconds.size();
  j["lipschitz_median_seconds"] = rep.lipschitz_median;
  j["socp_median_seconds"] = rep.socp_median;
  j["lipschitz_seconds"] = rep.lipschitz_seconds;
  j["socp_seconds"] = rep.socp_seconds;
  return j;
}

void export_certified_centers_csv(const CertifiedSet& set,
                                  const std::filesystem::path& path) {
  std::ostringstream os;
  const int n = set.members.empty() ? 0 : static_cast<int>(set.members[0].center.size());
  for (int i = 0; i < n; ++i) os << "x" << i << ",";
  os << "lipschitz_value,socp_value\n";
  for (const auto& rep : set.members) {
    for (int i = 0; i < n; ++i) os << fmt_double(rep.center[i]) << ",";
    os << (rep.lipschitz_value ? fmt_double(*rep.lipschitz_value) : "") << ","
       << (rep.socp_value ? fmt_double(*rep.socp_value) : "") << "\n";
  }
  write_text_atomic(path, os.str());
}

void export_sweep_csv(const std::vector<GammaSweepRow>& rows,
                      const std::filesystem::path& path) {
  std::ostringstream os;
  os << "gamma,iterations,converged,super_zero_volume,lipschitz_volume,"
        "socp_volume,certified_lipschitz,certified_socp,centers_examined,"
        "mean_reach_time,reached,never_reached\n";
  for (const auto& row : rows) {
    os << fmt_double(row.gamma) << "," << row.iterations << ","
       << (row.converged ? 1 : 0) << "," << fmt_double(row.super_zero_volume)
       << "," << fmt_double(row.lipschitz_volume) << ","
       << fmt_double(row.socp_volume) << "," << row.certified_lipschitz << ","
       << row.certified_socp << "," << row.centers_examined << ","
       << fmt_double(row.reach.mean_time) << "," << row.reach.reached << ","
       << row.reach.never_reached << "\n";
  }
  write_text_atomic(path, os.str());
}

void export_latency_csv(const LatencyReport& rep,
                        const std::filesystem::path& path) {
  std::ostringstream os;
  os << "sample,lipschitz_seconds,socp_seconds\n";
  for (std::size_t i = 0; i < rep.lipschitz_seconds.size(); ++i)
    os << i << "," << fmt_double(rep.lipschitz_seconds[i]) << ","
       << fmt_double(rep.socp_seconds[i]) << "\n";
  write_text_atomic(path, os.str());
}

SystemModel system_from_json(const Json& j) {
  SystemModel m;
  if (j.contains("name")) {
    ParamMap params;
    if (j.contains("params"))
      for (const auto& [k, v] : j["params"].items()) params[k] = v.get<double>();
    m = builtin_system(j["name"].get<std::string>(), params);
  } else if (j.contains("custom_linear")) {
    m = custom_linear_from_json(j["custom_linear"]);
    validate_psd(m.surrogate_constraint);
  } else {
    throw std::invalid_argument("system: expected 'name' or 'custom_linear'");
  }
  if (j.contains("mode")) apply_mode(m, mode_from_string(j["mode"].get<std::string>()));
  return m;
}

Grid grid_from_json(const Json& j) {
  std::vector<GridAxis> axes;
  for (const auto& aj : j.at("axes"))
    axes.push_back({aj.at("min").get<double>(), aj.at("max").get<double>(),
                    aj.at("count").get<int>()});
  return Grid(std::move(axes));
}

ActionLattice lattice_from_json(const SystemModel& model, const Json& j) {
  return ActionLattice::build(model, j.value("controls_per_dim", 11),
                              j.value("disturbances_per_dim", 5));
}

SolveOptions solve_options_from_json(const Json& j) {
  SolveOptions opts;
  opts.tol = j.value("tol", opts.tol);
  opts.max_iter = j.value("max_iter", opts.max_iter);
  opts.stable_window = j.value("stable_window", opts.stable_window);
  opts.threads = j.value("threads", opts.threads);
  return opts;
}

Json load_json_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config file: " + path.string());
  Json j;
  is >> j;
  return j;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + tmp.string());
    os << text;
  }
  std::filesystem::rename(tmp, path);
}

void write_json_atomic(const std::filesystem::path& path, const Json& j) {
  write_text_atomic(path, j.dump(2) + "\n");
}

void write_manifest(const std::filesystem::path& path, const std::string& command,
                    const Json& resolved_config,
                    const std::vector<std::string>& artifacts, std::uint64_t seed,
                    double wall_time_seconds) {
  Json j;
  j["command"] = command;
  j["config"] = resolved_config;
  j["artifacts"] = artifacts;
  j["seed"] = seed;
  j["version"] = toolkit_version();
  j["wall_time_seconds"] = wall_time_seconds;
  write_json_atomic(path, j);
}

std::string toolkit_version() { return "0.1.0"; }

}  // namespace racert
