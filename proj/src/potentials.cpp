#include "supanova/potentials.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <future>
#include <sstream>

#include <nlohmann/json.hpp>

#include "digest.hpp"
#include "supanova/tensor.hpp"

namespace supanova {

using nlohmann::json;

std::string subproblem_key(const SubproblemSpec& spec) {
  std::string bytes;
  detail::append_u64(bytes, spec.subset.size());
  for (Vertex v : spec.subset) detail::append_u64(bytes, v);
  detail::append_u64(bytes, static_cast<std::uint64_t>(spec.method_index));
  detail::append_u64(bytes, static_cast<std::uint64_t>(spec.basis_index));
  bytes += spec.linearization;
  bytes.push_back('\0');
  bytes += spec.geometry_digest;
  return detail::sha256_hex(bytes);
}

// ---------------------------------------------------------------------------
// SyntheticPotential
// ---------------------------------------------------------------------------

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic value in [-1, 1] from a seed, a stream tag, and a subset.
double seeded_unit(std::uint64_t seed, std::uint64_t tag, const VertexSet& v) {
  std::uint64_t h = splitmix64(seed ^ (tag * 0x9e3779b97f4a7c15ULL));
  for (Vertex x : v) h = splitmix64(h ^ (static_cast<std::uint64_t>(x) + 1));
  double unit = static_cast<double>(h >> 11) * 0x1.0p-53;  // [0, 1)
  return 2.0 * unit - 1.0;
}

void for_each_subset_between(const VertexSet& u, std::size_t min_size, std::size_t max_size,
                             const std::function<void(const VertexSet&)>& fn) {
  max_size = std::min(max_size, u.size());
  VertexSet current;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (current.size() >= min_size) fn(current);
    if (current.size() == max_size) return;
    for (std::size_t i = start; i < u.size(); ++i) {
      current.push_back(u[i]);
      rec(i + 1);
      current.pop_back();
    }
  };
  rec(0);
}

}  // namespace

SyntheticPotential::SyntheticPotential(Params params)
    : params_(std::move(params)), memo_(std::make_shared<Memo>()) {
  if (params_.sites == 0) throw std::invalid_argument("synthetic potential needs sites >= 1");
  if (!(params_.theta > 0.0 && params_.theta < 1.0)) {
    throw std::invalid_argument("theta must lie in (0, 1)");
  }
  if (params_.m_levels < 1 || params_.p_levels < 1) {
    throw std::invalid_argument("level axis sizes must be >= 1");
  }
  if (params_.max_body_order < 2) {
    throw std::invalid_argument("max body order must be >= 2");
  }
  if (params_.uncertainty < 0) throw std::invalid_argument("uncertainty must be >= 0");
}

double SyntheticPotential::one_body_weight(Vertex i) const {
  return params_.one_body_scale * seeded_unit(params_.seed, 1, {i});
}

double SyntheticPotential::pair_weight(Vertex i, Vertex j) const {
  auto it = params_.pair_table.find({std::min(i, j), std::max(i, j)});
  if (it != params_.pair_table.end()) return it->second;
  return params_.pair_scale * seeded_unit(params_.seed, 2, {std::min(i, j), std::max(i, j)});
}

double SyntheticPotential::many_body_weight(const VertexSet& v) const {
  return seeded_unit(params_.seed, 3, v);
}

double SyntheticPotential::base_potential(const VertexSet& u) const {
  if (!is_canonical_set(u) || (!u.empty() && u.back() >= params_.sites)) {
    throw std::domain_error("subset out of range for synthetic potential");
  }
  KahanAccumulator acc;
  for (Vertex i : u) acc.add(one_body_weight(i));
  for (std::size_t a = 0; a < u.size(); ++a) {
    for (std::size_t b = a + 1; b < u.size(); ++b) {
      acc.add(pair_weight(u[a], u[b]));
    }
  }
  if (u.size() >= 3) {
    for_each_subset_between(
        u, 3, static_cast<std::size_t>(params_.max_body_order), [&](const VertexSet& v) {
          acc.add(std::pow(params_.theta, static_cast<double>(v.size())) *
                  many_body_weight(v));
        });
  }
  return acc.value();
}

double SyntheticPotential::target() const {
  VertexSet all;
  all.reserve(params_.sites);
  for (Vertex i = 0; i < params_.sites; ++i) all.push_back(i);
  return base_potential(all);
}

double SyntheticPotential::method_deficiency(int m) const {
  if (m < 1 || m > params_.m_levels) throw std::domain_error("method index out of range");
  if (m == params_.m_levels) return 0.0;
  return params_.level_a0 * std::pow(params_.level_a_decay, m - 1);
}

double SyntheticPotential::basis_deficiency(int p) const {
  if (p < 1 || p > params_.p_levels) throw std::domain_error("basis index out of range");
  if (p == params_.p_levels) return 0.0;
  return params_.level_b0 * std::pow(params_.level_b_decay, p - 1);
}

// Many-body damped, so the level coupling never reintroduces slowly-decaying
// high-order structure.
double SyntheticPotential::subset_perturbation(const VertexSet& u) const {
  if (u.size() < 2) return 0.0;
  KahanAccumulator acc;
  for_each_subset_between(
      u, 2, static_cast<std::size_t>(params_.max_body_order), [&](const VertexSet& v) {
        acc.add(std::pow(params_.theta, static_cast<double>(v.size())) *
                seeded_unit(params_.seed, 4, v));
      });
  return acc.value();
}

double SyntheticPotential::value(const VertexSet& subset, int m, int p) const {
  double a = method_deficiency(m);
  double b = basis_deficiency(p);
  {
    std::lock_guard<std::mutex> lock(memo_->mutex);
    auto it = memo_->by_subset.find(subset);
    if (it != memo_->by_subset.end()) {
      return it->second.first * (1.0 - a - b) + a * b * it->second.second;
    }
  }
  double base = base_potential(subset);
  double perturbation = subset_perturbation(subset);
  {
    std::lock_guard<std::mutex> lock(memo_->mutex);
    memo_->by_subset.emplace(subset, std::make_pair(base, perturbation));
  }
  return base * (1.0 - a - b) + a * b * perturbation;
}

SystemSizes SyntheticPotential::sizes_for(const VertexSet& subset, int basis_index) const {
  if (basis_index < 1 || basis_index > params_.p_levels) {
    throw std::domain_error("basis index out of range");
  }
  SystemSizes s;
  auto n = static_cast<std::int64_t>(subset.size());
  std::int64_t p3 = static_cast<std::int64_t>(basis_index) * basis_index * basis_index;
  s.n_ao = params_.ao_per_site * n * p3;
  s.n_occ = (params_.electrons_per_site * n + 1) / 2;
  s.n_corr = s.n_occ;
  s.n_virt = std::max<std::int64_t>(0, s.n_ao - s.n_occ);
  std::int64_t sp = params_.shellpairs_per_site * basis_index;
  std::int64_t pair_count = n * (n + 1) / 2;
  std::int64_t screened = sp * sp * pair_count;
  s.n_eri = screened * screened;
  return s;
}

double SyntheticPotential::cost_for(const CostParams& cost_params, const VertexSet& subset,
                                    int m, int p) const {
  if (subset.empty()) return 0.0;
  return cost_of_spec(cost_params, m, sizes_for(subset, p));
}

EvaluationRecord SyntheticPotential::evaluate(const CostParams& cost_params,
                                              const SubproblemSpec& spec) const {
  EvaluationRecord record;
  record.value = value(spec.subset, spec.method_index, spec.basis_index);
  record.uncertainty = params_.uncertainty;
  record.abstract_cost = cost_for(cost_params, spec.subset, spec.method_index,
                                  spec.basis_index);
  record.backend = "synthetic";
  return record;
}

// ---------------------------------------------------------------------------
// EvaluationLedger
// ---------------------------------------------------------------------------

namespace {

std::string record_payload(const std::string& key, const EvaluationRecord& r) {
  json j;
  j["key"] = key;
  j["value"] = r.value;
  j["uncertainty"] = r.uncertainty;
  j["cost"] = r.abstract_cost;
  j["wall_s"] = r.wall_time_s;
  j["backend"] = r.backend;
  if (r.reported_n_ao) j["n_ao"] = *r.reported_n_ao;
  if (r.reported_n_eri) j["n_eri"] = *r.reported_n_eri;
  return j.dump();
}

}  // namespace

EvaluationLedger::EvaluationLedger(std::string path) : path_(std::move(path)) {
  std::ifstream in(path_);
  if (!in) return;  // fresh store
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto tab = line.rfind('\t');
    if (tab == std::string::npos) {
      throw IntegrityError("ledger " + path_ + " line " + std::to_string(line_no) +
                           ": missing checksum");
    }
    std::string payload = line.substr(0, tab);
    std::string checksum = line.substr(tab + 1);
    char* end = nullptr;
    unsigned long parsed = std::strtoul(checksum.c_str(), &end, 16);
    if (end == checksum.c_str() || *end != '\0' ||
        static_cast<std::uint32_t>(parsed) != detail::crc32_of(payload)) {
      throw IntegrityError("ledger " + path_ + " line " + std::to_string(line_no) +
                           ": checksum mismatch");
    }
    json j = json::parse(payload, nullptr, false);
    if (j.is_discarded() || !j.contains("key")) {
      throw IntegrityError("ledger " + path_ + " line " + std::to_string(line_no) +
                           ": malformed record");
    }
    EvaluationRecord r;
    r.value = j.at("value").get<double>();
    r.uncertainty = j.at("uncertainty").get<double>();
    r.abstract_cost = j.at("cost").get<double>();
    r.wall_time_s = j.at("wall_s").get<double>();
    r.backend = j.at("backend").get<std::string>();
    if (j.contains("n_ao")) r.reported_n_ao = j.at("n_ao").get<std::int64_t>();
    if (j.contains("n_eri")) r.reported_n_eri = j.at("n_eri").get<std::int64_t>();
    entries_.emplace(j.at("key").get<std::string>(), r);
  }
}

std::optional<EvaluationRecord> EvaluationLedger::get(const std::string& key) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void EvaluationLedger::put(const std::string& key, const EvaluationRecord& record) {
  std::lock_guard<std::mutex> lock(mutex_);
  if (entries_.count(key)) return;
  std::string payload = record_payload(key, record);
  char checksum[16];
  std::snprintf(checksum, sizeof checksum, "%08x", detail::crc32_of(payload));
  std::ofstream out(path_, std::ios::app);
  if (!out) throw IntegrityError("cannot append to ledger: " + path_);
  out << payload << '\t' << checksum << '\n';
  out.flush();
  if (!out) throw IntegrityError("short write to ledger: " + path_);
  entries_.emplace(key, record);
}

std::size_t EvaluationLedger::size() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return entries_.size();
}

// ---------------------------------------------------------------------------
// ExternalEvaluator
// ---------------------------------------------------------------------------

struct ExternalEvaluator::Impl {
  ExternalBackendConfig config;

  std::mutex mutex;
  std::condition_variable slot_available;
  int in_flight = 0;
  std::uint64_t next_id = 0;
  bool spawned = false;
  bool reader_eof = false;
  pid_t pid = -1;
  int stdin_fd = -1;
  int stdout_fd = -1;
  std::thread reader;
  std::map<std::string, std::promise<json>> pending;

  explicit Impl(ExternalBackendConfig cfg) : config(std::move(cfg)) {
    if (config.command.empty()) {
      throw std::invalid_argument("external backend command is empty");
    }
  }

  void spawn_locked() {
    int to_child[2];
    int from_child[2];
    if (pipe(to_child) != 0 || pipe(from_child) != 0) {
      throw EvaluationError("failed to create backend pipes");
    }
    pid = fork();
    if (pid < 0) throw EvaluationError("failed to fork backend process");
    if (pid == 0) {
      dup2(to_child[0], STDIN_FILENO);
      dup2(from_child[1], STDOUT_FILENO);
      close(to_child[0]);
      close(to_child[1]);
      close(from_child[0]);
      close(from_child[1]);
      std::vector<char*> argv;
      for (auto& arg : config.command) argv.push_back(const_cast<char*>(arg.c_str()));
      argv.push_back(nullptr);
      execvp(argv[0], argv.data());
      std::fprintf(stderr, "exec of backend '%s' failed: %s\n", argv[0],
                   std::strerror(errno));
      _exit(127);
    }
    close(to_child[0]);
    close(from_child[1]);
    stdin_fd = to_child[1];
    stdout_fd = from_child[0];
    spawned = true;
    reader = std::thread([this] { read_loop(); });
  }

  void read_loop() {
    std::string buffer;
    char chunk[4096];
    for (;;) {
      ssize_t n = read(stdout_fd, chunk, sizeof chunk);
      if (n <= 0) break;
      buffer.append(chunk, static_cast<std::size_t>(n));
      std::size_t start = 0;
      for (;;) {
        std::size_t newline = buffer.find('\n', start);
        if (newline == std::string::npos) break;
        dispatch_line(buffer.substr(start, newline - start));
        start = newline + 1;
      }
      buffer.erase(0, start);
    }
    std::lock_guard<std::mutex> lock(mutex);
    reader_eof = true;
    for (auto& [id, promise] : pending) {
      promise.set_exception(std::make_exception_ptr(
          EvaluationError("backend closed its output stream before responding")));
    }
    pending.clear();
  }

  void dispatch_line(const std::string& line) {
    if (line.empty()) return;
    json j = json::parse(line, nullptr, false);
    std::lock_guard<std::mutex> lock(mutex);
    if (j.is_discarded() || !j.contains("id")) {
      // Poison every waiter: the stream is no longer trustworthy.
      for (auto& [id, promise] : pending) {
        promise.set_exception(std::make_exception_ptr(
            EvaluationError("malformed backend response line: " + line)));
      }
      pending.clear();
      return;
    }
    auto it = pending.find(j.at("id").get<std::string>());
    if (it == pending.end()) return;  // late response for an abandoned request
    it->second.set_value(std::move(j));
    pending.erase(it);
  }

  void shutdown() {
    {
      std::lock_guard<std::mutex> lock(mutex);
      if (!spawned) return;
    }
    close(stdin_fd);
    if (reader.joinable()) reader.join();
    close(stdout_fd);
    int status = 0;
    for (int i = 0; i < 20; ++i) {
      pid_t done = waitpid(pid, &status, WNOHANG);
      if (done == pid) return;
      std::this_thread::sleep_for(std::chrono::milliseconds(25));
    }
    kill(pid, SIGKILL);
    waitpid(pid, &status, 0);
  }
};

ExternalEvaluator::ExternalEvaluator(ExternalBackendConfig config)
    : impl_(std::make_unique<Impl>(std::move(config))) {}

ExternalEvaluator::~ExternalEvaluator() {
  if (impl_) impl_->shutdown();
}

EvaluationRecord ExternalEvaluator::evaluate(
    const SubproblemSpec& spec, const std::vector<Atom>& real_atoms,
    const std::vector<std::array<double, 3>>& link_positions) {
  auto start = std::chrono::steady_clock::now();
  json request;
  std::string id;
  {
    std::unique_lock<std::mutex> lock(impl_->mutex);
    if (!impl_->spawned) impl_->spawn_locked();
    impl_->slot_available.wait(lock, [&] {
      return impl_->in_flight < impl_->config.max_in_flight;
    });
    ++impl_->in_flight;
    id = "req-" + std::to_string(impl_->next_id++);
  }

  request["id"] = id;
  json atoms = json::array();
  for (const auto& atom : real_atoms) {
    atoms.push_back({{"Z", atom.z}, {"xyz", {atom.xyz[0], atom.xyz[1], atom.xyz[2]}}});
  }
  request["atoms"] = std::move(atoms);
  json links = json::array();
  for (const auto& pos : link_positions) {
    links.push_back({{"xyz", {pos[0], pos[1], pos[2]}}});
  }
  request["link_atoms"] = std::move(links);
  request["method_index"] = spec.method_index;
  request["basis_index"] = spec.basis_index;
  request["charge"] = impl_->config.charge;
  request["spin"] = impl_->config.spin;

  std::future<json> future;
  {
    std::lock_guard<std::mutex> lock(impl_->mutex);
    if (impl_->reader_eof) {
      --impl_->in_flight;
      impl_->slot_available.notify_one();
      throw EvaluationError("backend process is no longer running");
    }
    future = impl_->pending[id].get_future();
  }

  std::string line = request.dump() + "\n";
  {
    std::lock_guard<std::mutex> lock(impl_->mutex);
    const char* data = line.data();
    std::size_t remaining = line.size();
    while (remaining > 0) {
      ssize_t n = write(impl_->stdin_fd, data, remaining);
      if (n < 0) {
        if (errno == EINTR) continue;
        impl_->pending.erase(id);
        --impl_->in_flight;
        impl_->slot_available.notify_one();
        throw EvaluationError(std::string("write to backend failed: ") +
                              std::strerror(errno));
      }
      data += n;
      remaining -= static_cast<std::size_t>(n);
    }
  }

  auto release_slot = [&] {
    std::lock_guard<std::mutex> lock(impl_->mutex);
    impl_->pending.erase(id);
    --impl_->in_flight;
    impl_->slot_available.notify_one();
  };

  auto deadline = std::chrono::duration<double>(impl_->config.timeout_s);
  if (future.wait_for(deadline) != std::future_status::ready) {
    release_slot();
    throw EvaluationError("backend response timed out after " +
                          std::to_string(impl_->config.timeout_s) + " s (request " + id +
                          ")");
  }
  json response;
  try {
    response = future.get();
  } catch (...) {
    release_slot();
    throw;
  }
  release_slot();

  if (!response.contains("energy_hartree") || !response["energy_hartree"].is_number()) {
    throw EvaluationError("backend response lacks energy_hartree: " + response.dump());
  }
  EvaluationRecord record;
  record.value = response["energy_hartree"].get<double>();
  if (std::isnan(record.value)) {
    throw EvaluationError("backend reported NaN energy for request " + id);
  }
  record.uncertainty = response.value("uncertainty_hartree", kDefaultUncertainty);
  if (record.uncertainty < 0) {
    throw EvaluationError("backend reported negative uncertainty for request " + id);
  }
  record.backend = impl_->config.command[0];
  record.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (response.contains("n_ao")) {
    record.reported_n_ao = response["n_ao"].get<std::int64_t>();
  }
  if (response.contains("n_eri")) {
    record.reported_n_eri = response["n_eri"].get<std::int64_t>();
  }
  return record;
}

}  // namespace supanova
