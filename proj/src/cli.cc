// Copyright 2026 The Arca Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "arca/cli.h"

#include <fcntl.h>
#include <sys/file.h>
#include <sys/stat.h>
#include <unistd.h>

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>

#include "arca/adversary.h"
#include "arca/attestation.h"
#include "arca/bench.h"
#include "arca/ccm.h"
#include "arca/json_util.h"
#include "arca/measurement.h"
#include "arca/primitives.h"
#include "arca/random.h"
#include "arca/status.h"
#include "arca/teesim.h"

namespace arca::cli {
namespace {

namespace fs = std::filesystem;

using json::Value;

enum class Format { kText, kJson };

struct Globals {
  std::string state_dir = ".arca";
  std::optional<uint64_t> seed;
  Format format = Format::kText;
};

int ExitFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kOk:
      return kExitOk;
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kIoError:
    case ErrorCode::kParseError:
    case ErrorCode::kInvalidSpec:
    case ErrorCode::kUnknownContainer:
    case ErrorCode::kUnknownFault:
    case ErrorCode::kUnknownDomain:
    case ErrorCode::kEmptyManifest:
    case ErrorCode::kDuplicateComponent:
    case ErrorCode::kScenarioSetupError:
      return kExitUsage;
    default:
      return kExitSecurity;
  }
}

absl::StatusOr<Bytes> ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return Error(ErrorCode::kIoError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string s = ss.str();
  return Bytes(s.begin(), s.end());
}

absl::Status WriteFile(const fs::path& path, ByteSpan data,
                       mode_t mode = 0644) {
  fs::path tmp = path;
  tmp += ".tmp";
  int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC, mode);
  if (fd < 0) return Error(ErrorCode::kIoError, "cannot write " + path.string());
  size_t off = 0;
  while (off < data.size()) {
    ssize_t n = ::write(fd, data.data() + off, data.size() - off);
    if (n <= 0) {
      ::close(fd);
      return Error(ErrorCode::kIoError, "short write to " + path.string());
    }
    off += static_cast<size_t>(n);
  }
  ::close(fd);
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) return Error(ErrorCode::kIoError, "cannot rename " + path.string());
  return absl::OkStatus();
}

absl::Status WriteText(const fs::path& path, const std::string& text) {
  return WriteFile(path, AsBytes(text));
}

absl::StatusOr<Value> ReadJson(const fs::path& path) {
  ARCA_ASSIGN_OR_RETURN(Bytes raw, ReadFile(path));
  return json::Parse(std::string(raw.begin(), raw.end()), path.filename().string());
}

// An open, locked state directory plus the randomness for this invocation.
class Session {
 public:
  static absl::StatusOr<std::unique_ptr<Session>> Open(const Globals& g) {
    auto s = std::unique_ptr<Session>(new Session());
    s->dir_ = g.state_dir;
    std::error_code ec;
    for (const char* sub : {"", "vendors", "platforms", "containers"}) {
      fs::create_directories(s->dir_ / sub, ec);
      if (ec) {
        return Error(ErrorCode::kIoError,
                     "cannot create state dir " + (s->dir_ / sub).string());
      }
    }
    s->lock_fd_ = ::open((s->dir_ / "lock").c_str(), O_RDWR | O_CREAT, 0600);
    if (s->lock_fd_ < 0 || ::flock(s->lock_fd_, LOCK_EX) != 0) {
      return Error(ErrorCode::kIoError, "cannot lock state dir");
    }
    if (g.seed) {
      uint64_t counter = 0;
      if (auto raw = ReadFile(s->dir_ / "counter"); raw.ok()) {
        counter = std::stoull(std::string(raw->begin(), raw->end()));
      }
      ARCA_RETURN_IF_ERROR(
          WriteText(s->dir_ / "counter", std::to_string(counter + 1)));
      s->rng_ = std::make_unique<DeterministicRandom>(*g.seed, counter);
    } else {
      s->rng_ = std::make_unique<SystemRandom>();
    }
    ARCA_RETURN_IF_ERROR(s->LoadKek());
    return s;
  }

  ~Session() {
    if (lock_fd_ >= 0) {
      ::flock(lock_fd_, LOCK_UN);
      ::close(lock_fd_);
    }
  }

  RandomSource& rng() { return *rng_; }
  const fs::path& dir() const { return dir_; }

  absl::StatusOr<std::shared_ptr<teesim::VendorAuthority>> Vendor(
      Profile profile, bool create) {
    fs::path path = dir_ / "vendors" / (std::string(ProfileName(profile)) + ".bin");
    if (fs::exists(path)) {
      ARCA_ASSIGN_OR_RETURN(Bytes raw, ReadFile(path));
      return teesim::VendorAuthority::ImportWrapped(kek_, raw);
    }
    if (!create) return Error(ErrorCode::kIoError, "missing vendor state");
    auto vendor = teesim::VendorAuthority::Create(profile, *rng_);
    ARCA_RETURN_IF_ERROR(SaveVendor(*vendor));
    return vendor;
  }

  absl::Status SaveVendor(const teesim::VendorAuthority& vendor) {
    ARCA_ASSIGN_OR_RETURN(Bytes wrapped, vendor.ExportWrapped(kek_, *rng_));
    return WriteFile(
        dir_ / "vendors" / (std::string(ProfileName(vendor.profile())) + ".bin"),
        wrapped, 0600);
  }

  struct LoadedPlatform {
    std::shared_ptr<teesim::Platform> platform;
    uint64_t tcb_floor = 0;
  };

  absl::Status SavePlatform(const teesim::Platform& platform, uint64_t floor) {
    std::string id = ToHex(platform.id());
    Value rec = Value::object();
    rec["version"] = 1;
    rec["id"] = id;
    rec["profile"] = ProfileName(platform.profile());
    rec["tcb_floor"] = floor;
    ARCA_RETURN_IF_ERROR(
        WriteText(dir_ / "platforms" / (id + ".json"), rec.dump(2) + "\n"));
    ARCA_ASSIGN_OR_RETURN(Bytes wrapped, platform.ExportWrapped(kek_, *rng_));
    return WriteFile(dir_ / "platforms" / (id + ".bin"), wrapped, 0600);
  }

  absl::StatusOr<LoadedPlatform> LoadPlatform(const std::string& id) {
    fs::path rec_path = dir_ / "platforms" / (id + ".json");
    if (id.size() != 64 || !fs::exists(rec_path)) {
      return Error(ErrorCode::kInvalidArgument, "unknown platform " + id);
    }
    ARCA_ASSIGN_OR_RETURN(Value rec, ReadJson(rec_path));
    ARCA_ASSIGN_OR_RETURN(std::string pname, json::String(rec, "profile"));
    std::optional<Profile> profile = ProfileFromName(pname);
    if (!profile) return Error(ErrorCode::kParseError, "bad platform profile");
    ARCA_ASSIGN_OR_RETURN(uint64_t floor, json::Uint(rec, "tcb_floor"));
    ARCA_ASSIGN_OR_RETURN(auto vendor, Vendor(*profile, false));
    ARCA_ASSIGN_OR_RETURN(Bytes wrapped,
                          ReadFile(dir_ / "platforms" / (id + ".bin")));
    ARCA_ASSIGN_OR_RETURN(auto platform,
                          teesim::Platform::ImportWrapped(kek_, wrapped, vendor));
    return LoadedPlatform{std::move(platform), floor};
  }

  std::vector<Value> ListPlatforms() {
    std::vector<fs::path> paths;
    for (const auto& e : fs::directory_iterator(dir_ / "platforms")) {
      if (e.path().extension() == ".json") paths.push_back(e.path());
    }
    std::sort(paths.begin(), paths.end());
    std::vector<Value> out;
    for (const auto& p : paths) {
      if (auto v = ReadJson(p); v.ok()) out.push_back(*std::move(v));
    }
    return out;
  }

  fs::path ContainerPath(const std::string& id) const {
    return dir_ / "containers" / (id + ".json");
  }

 private:
  Session() = default;

  absl::Status LoadKek() {
    fs::path path = dir_ / "keyfile";
    Bytes key;
    if (fs::exists(path)) {
      ARCA_ASSIGN_OR_RETURN(key, ReadFile(path));
      if (key.size() != 32) return Error(ErrorCode::kIoError, "corrupt keyfile");
    } else {
      key = rng_->Generate(32);
      ARCA_RETURN_IF_ERROR(WriteFile(path, key, 0600));
      ::chmod(path.c_str(), 0600);
    }
    ARCA_ASSIGN_OR_RETURN(Bytes kek, primitives::Kdf(key, AsBytes("arca-cli-state"),
                                                     "state-kek", 16));
    SecureWipe(key);
    ARCA_ASSIGN_OR_RETURN(kek_, primitives::SymmetricKey::Create(kek, "state-kek"));
    SecureWipe(kek);
    return absl::OkStatus();
  }

  fs::path dir_;
  int lock_fd_ = -1;
  std::unique_ptr<RandomSource> rng_;
  primitives::SymmetricKey kek_;
};

struct ContainerRecord {
  std::string id;
  std::string name;
  std::string platform;
  std::string spec_path;
  std::string state;
  std::vector<std::string> target_faults;

  Value ToJson() const {
    Value v = Value::object();
    v["version"] = 1;
    v["id"] = id;
    v["name"] = name;
    v["platform"] = platform;
    v["spec_path"] = spec_path;
    v["state"] = state;
    v["target_faults"] = target_faults;
    return v;
  }
};

absl::StatusOr<ContainerRecord> LoadRecord(Session& s, const std::string& id) {
  fs::path path = s.ContainerPath(id);
  if (id.size() != 64 || !fs::exists(path)) {
    return Error(ErrorCode::kUnknownContainer, "unknown container " + id);
  }
  ARCA_ASSIGN_OR_RETURN(Value v, ReadJson(path));
  ARCA_RETURN_IF_ERROR(json::RequireVersion(v, "container record"));
  ContainerRecord r;
  ARCA_ASSIGN_OR_RETURN(r.id, json::String(v, "id"));
  ARCA_ASSIGN_OR_RETURN(r.name, json::String(v, "name"));
  ARCA_ASSIGN_OR_RETURN(r.platform, json::String(v, "platform"));
  ARCA_ASSIGN_OR_RETURN(r.spec_path, json::String(v, "spec_path"));
  ARCA_ASSIGN_OR_RETURN(r.state, json::String(v, "state"));
  if (v.contains("target_faults")) {
    r.target_faults = v["target_faults"].get<std::vector<std::string>>();
  }
  return r;
}

absl::Status SaveRecord(Session& s, const ContainerRecord& r) {
  return WriteText(s.ContainerPath(r.id), r.ToJson().dump(2) + "\n");
}

struct LoadedSpec {
  ccm::DeploymentSpec spec;
  fs::path base_dir;
};

absl::StatusOr<LoadedSpec> LoadSpec(const std::string& path) {
  fs::path p = fs::absolute(path);
  ARCA_ASSIGN_OR_RETURN(Bytes raw, ReadFile(p));
  LoadedSpec out;
  out.base_dir = p.parent_path();
  ARCA_ASSIGN_OR_RETURN(out.spec,
                        ccm::ParseSpec(std::string(raw.begin(), raw.end()),
                                       ccm::FileLoader(out.base_dir.string())));
  return out;
}

// Everything a verifier on the user side needs for one spec.
struct Appraisal {
  measurement::TrustPolicy policy;
  attestation::PlatformMetadata meta;
};

absl::StatusOr<Appraisal> AppraisalFor(const LoadedSpec& ls,
                                       const Session::LoadedPlatform& lp) {
  Appraisal a;
  if (ls.spec.policy_path) {
    ARCA_ASSIGN_OR_RETURN(Bytes raw, ReadFile(ls.base_dir / *ls.spec.policy_path));
    ARCA_ASSIGN_OR_RETURN(a.policy,
                          measurement::LoadPolicy(std::string(raw.begin(), raw.end())));
  } else {
    ARCA_ASSIGN_OR_RETURN(a.policy, ccm::ReferencePolicy(ls.spec, lp.tcb_floor));
  }
  if (ls.spec.metadata_path) {
    ARCA_ASSIGN_OR_RETURN(Bytes raw,
                          ReadFile(ls.base_dir / *ls.spec.metadata_path));
    ARCA_ASSIGN_OR_RETURN(
        a.meta, attestation::LoadMetadata(std::string(raw.begin(), raw.end())));
  } else {
    a.meta = attestation::PlatformMetadata::FromVendor(lp.platform->vendor(),
                                                       lp.tcb_floor);
  }
  return a;
}

Value VerdictJson(const attestation::Verdict& v, const std::string& container) {
  Value out = Value::object();
  out["container"] = container;
  out["result"] = v.result();
  out["reason"] = attestation::ReasonName(v.reason);
  if (v.attested_public_key) out["attested_public_key"] = ToHex(*v.attested_public_key);
  if (!v.detail.empty()) out["detail"] = v.detail;
  return out;
}

class Runner {
 public:
  Runner(Globals& g, std::ostream& out, std::ostream& err)
      : g_(g), out_(out), err_(err) {}

  int Fail(const absl::Status& status) {
    ErrorCode code = ErrorOf(status);
    if (g_.format == Format::kJson) {
      Value v = Value::object();
      v["error"] = ErrorCodeName(code);
      v["message"] = std::string(status.message());
      out_ << v.dump() << "\n";
    } else {
      err_ << "error: " << status.message() << "\n";
    }
    return ExitFor(code);
  }

  template <typename Fn>
  int Guard(Fn&& fn) {
    absl::StatusOr<int> r = fn();
    if (!r.ok()) return Fail(r.status());
    return *r;
  }

  absl::StatusOr<Session*> State() {
    if (!session_) {
      ARCA_ASSIGN_OR_RETURN(session_, Session::Open(g_));
    }
    return session_.get();
  }

  void Emit(const Value& v, const std::string& text) {
    if (g_.format == Format::kJson) {
      out_ << v.dump() << "\n";
    } else {
      out_ << text << "\n";
    }
  }

  absl::StatusOr<int> PlatformCreate(const std::string& profile_name,
                                     uint64_t tcb) {
    std::optional<Profile> profile = ProfileFromName(profile_name);
    if (!profile) {
      return Error(ErrorCode::kInvalidArgument, "unknown profile " + profile_name);
    }
    ARCA_ASSIGN_OR_RETURN(Session * s, State());
    ARCA_ASSIGN_OR_RETURN(auto vendor, s->Vendor(*profile, true));
    auto platform = teesim::Platform::Create(*profile, tcb, vendor, s->rng());
    ARCA_RETURN_IF_ERROR(s->SavePlatform(*platform, tcb));
    Value v = Value::object();
    v["platform"] = ToHex(platform->id());
    v["profile"] = profile_name;
    v["tcb"] = tcb;
    Emit(v, ToHex(platform->id()));
    return kExitOk;
  }

  absl::StatusOr<int> PlatformList() {
    ARCA_ASSIGN_OR_RETURN(Session * s, State());
    Value list = Value::array();
    std::string text;
    for (Value& rec : s->ListPlatforms()) {
      std::string id = rec.value("id", "");
      absl::StatusOr<Session::LoadedPlatform> lp = s->LoadPlatform(id);
      Value item = Value::object();
      item["platform"] = id;
      item["profile"] = rec.value("profile", "");
      item["tcb_floor"] = rec.value("tcb_floor", 0);
      if (lp.ok()) {
        item["tcb"] = lp->platform->tcb_version();
        Value faults = Value::array();
        for (teesim::FaultKind f : lp->platform->ArmedFaults()) {
          faults.push_back(teesim::FaultName(f));
        }
        item["armed_faults"] = faults;
      }
      if (!text.empty()) text += "\n";
      text += id + " " + item["profile"].get<std::string>() + " tcb=" +
              (item.contains("tcb") ? std::to_string(item["tcb"].get<uint64_t>())
                                    : std::string("?"));
      list.push_back(std::move(item));
    }
    Value v = Value::object();
    v["platforms"] = list;
    if (g_.format == Format::kJson) {
      Emit(v, "");
    } else if (!text.empty()) {
      out_ << text << "\n";
    }
    return kExitOk;
  }

  // A live re-deployment of a recorded container, used by every command
  // that needs the domain up.
  struct Live {
    LoadedSpec spec;
    Session::LoadedPlatform platform;
    Appraisal appraisal;
    std::unique_ptr<ccm::Manager> manager;
    ccm::DeployOutcome outcome;
  };

  absl::StatusOr<std::unique_ptr<Live>> Prepare(Session& s,
                                                const std::string& spec_path,
                                                const std::string& platform_id,
                                                const std::vector<std::string>&
                                                    target_faults) {
    auto live = std::make_unique<Live>();
    ARCA_ASSIGN_OR_RETURN(live->spec, LoadSpec(spec_path));
    ARCA_ASSIGN_OR_RETURN(live->platform, s.LoadPlatform(platform_id));
    ARCA_ASSIGN_OR_RETURN(live->appraisal, AppraisalFor(live->spec, live->platform));
    // Faults aimed at this one container: armed only for this invocation,
    // which launches nothing else.
    for (const std::string& name : target_faults) {
      ARCA_ASSIGN_OR_RETURN(teesim::FaultKind kind, teesim::FaultFromName(name));
      ARCA_RETURN_IF_ERROR(live->platform.platform->InjectFault({kind, std::nullopt}));
    }
    return live;
  }

  absl::Status DeployLive(Session& s, Live& live) {
    live.manager = std::make_unique<ccm::Manager>(live.platform.platform, s.rng());
    live.outcome = live.manager->Deploy(live.spec.spec, live.appraisal.policy,
                                        live.appraisal.meta);
    return live.outcome.status;
  }

  absl::StatusOr<int> Deploy(const std::string& spec_path,
                             const std::string& platform_id) {
    ARCA_ASSIGN_OR_RETURN(Session * s, State());
    ARCA_ASSIGN_OR_RETURN(auto live, Prepare(*s, spec_path, platform_id, {}));
    absl::Status st = DeployLive(*s, *live);
    ContainerRecord rec;
    rec.id = ToHex(live->outcome.id);
    rec.name = live->spec.spec.name;
    rec.platform = platform_id;
    rec.spec_path = fs::absolute(spec_path).string();
    rec.state = std::string(ccm::StateName(live->outcome.state));
    ARCA_RETURN_IF_ERROR(SaveRecord(*s, rec));
    return ReportDeploy(*live, rec.id, st);
  }

  int ReportDeploy(const Live& live, const std::string& id,
                   const absl::Status& st) {
    const std::optional<attestation::Verdict>& verdict = live.outcome.verdict;
    if (verdict && (!verdict->accepted() || st.ok())) {
      Value v = VerdictJson(*verdict, id);
      v["state"] = ccm::StateName(live.outcome.state);
      std::string text(verdict->result());
      if (!verdict->accepted()) {
        text += " " + std::string(attestation::ReasonName(verdict->reason));
      }
      Emit(v, text + " " + id);
      return verdict->accepted() ? kExitOk : kExitSecurity;
    }
    return Fail(st);
  }

  absl::StatusOr<int> Attest(const std::string& id) {
    ARCA_ASSIGN_OR_RETURN(Session * s, State());
    ARCA_ASSIGN_OR_RETURN(ContainerRecord rec, LoadRecord(*s, id));
    ARCA_ASSIGN_OR_RETURN(auto live,
                          Prepare(*s, rec.spec_path, rec.platform, rec.target_faults));
    absl::Status st = DeployLive(*s, *live);
    if (rec.state != "Stopped") {
      rec.state = std::string(ccm::StateName(live->outcome.state));
      ARCA_RETURN_IF_ERROR(SaveRecord(*s, rec));
    }
    if (!live->outcome.verdict) return Fail(st);
    Value v = VerdictJson(*live->outcome.verdict, id);
    out_ << (g_.format == Format::kJson ? v.dump() : v.dump(2)) << "\n";
    return live->outcome.verdict->accepted() ? kExitOk : kExitSecurity;
  }

  absl::StatusOr<int> Exec(const std::string& id, const std::string& input_hex) {
    ARCA_ASSIGN_OR_RETURN(Session * s, State());
    ARCA_ASSIGN_OR_RETURN(ContainerRecord rec, LoadRecord(*s, id));
    absl::StatusOr<Bytes> input = FromHex(input_hex);
    if (!input.ok()) return Error(ErrorCode::kInvalidArgument, "input is not hex");
    if (rec.state != "Running") {
      return Error(ErrorCode::kNotRunning, "container is " + rec.state);
    }
    ARCA_ASSIGN_OR_RETURN(auto live,
                          Prepare(*s, rec.spec_path, rec.platform, rec.target_faults));
    if (absl::Status st = DeployLive(*s, *live); !st.ok()) {
      rec.state = std::string(ccm::StateName(live->outcome.state));
      ARCA_RETURN_IF_ERROR(SaveRecord(*s, rec));
      return st;
    }
    ARCA_ASSIGN_OR_RETURN(Bytes output, live->manager->Exec(live->outcome.id, *input));
    Value v = Value::object();
    v["container"] = id;
    v["output"] = ToHex(output);
    Emit(v, ToHex(output));
    return kExitOk;
  }

  absl::StatusOr<int> Seal(const std::string& id, const std::string& in_path,
                           const std::string& out_path, bool seal) {
    ARCA_ASSIGN_OR_RETURN(Session * s, State());
    ARCA_ASSIGN_OR_RETURN(ContainerRecord rec, LoadRecord(*s, id));
    ARCA_ASSIGN_OR_RETURN(Bytes data, ReadFile(in_path));
    ARCA_ASSIGN_OR_RETURN(auto live,
                          Prepare(*s, rec.spec_path, rec.platform, rec.target_faults));
    Bytes result;
    if (seal) {
      ARCA_ASSIGN_OR_RETURN(result, ccm::SealRootfs(live->spec.spec,
                                                    *live->platform.platform,
                                                    data, s->rng()));
    } else {
      ARCA_ASSIGN_OR_RETURN(result, ccm::UnsealRootfs(live->spec.spec,
                                                      *live->platform.platform,
                                                      data));
    }
    ARCA_RETURN_IF_ERROR(WriteFile(out_path, result, 0600));
    Value v = Value::object();
    v["container"] = id;
    v["output"] = out_path;
    v["bytes"] = result.size();
    Emit(v, std::string(seal ? "sealed " : "unsealed ") +
                std::to_string(result.size()) + " bytes to " + out_path);
    return kExitOk;
  }

  absl::StatusOr<int> Inject(const std::string& platform_id,
                             const std::string& fault_name,
                             const std::string& target,
                             std::optional<uint64_t> tcb_value) {
    absl::StatusOr<teesim::FaultKind> kind = teesim::FaultFromName(fault_name);
    if (!kind.ok()) return kind.status();
    ARCA_ASSIGN_OR_RETURN(Session * s, State());
    Value v = Value::object();
    v["fault"] = fault_name;
    if (!target.empty()) {
      if (!teesim::IsDomainFault(*kind)) {
        return Error(ErrorCode::kInvalidArgument,
                     fault_name + " is a platform fault; omit --target");
      }
      ARCA_ASSIGN_OR_RETURN(ContainerRecord rec, LoadRecord(*s, target));
      if (std::find(rec.target_faults.begin(), rec.target_faults.end(),
                    fault_name) == rec.target_faults.end()) {
        rec.target_faults.push_back(fault_name);
      }
      ARCA_RETURN_IF_ERROR(SaveRecord(*s, rec));
      v["container"] = target;
      Emit(v, "armed " + fault_name + " on container " + target);
      return kExitOk;
    }
    if (platform_id.empty()) {
      return Error(ErrorCode::kInvalidArgument, "--platform or --target required");
    }
    ARCA_ASSIGN_OR_RETURN(Session::LoadedPlatform lp, s->LoadPlatform(platform_id));
    ARCA_RETURN_IF_ERROR(lp.platform->InjectFault({*kind, tcb_value}));
    if (*kind == teesim::FaultKind::kRevokeLeaf) {
      ARCA_RETURN_IF_ERROR(s->SaveVendor(lp.platform->vendor()));
    }
    ARCA_RETURN_IF_ERROR(s->SavePlatform(*lp.platform, lp.tcb_floor));
    v["platform"] = platform_id;
    Emit(v, "armed " + fault_name + " on platform " + platform_id);
    return kExitOk;
  }

  absl::StatusOr<int> Teardown(const std::string& id) {
    ARCA_ASSIGN_OR_RETURN(Session * s, State());
    ARCA_ASSIGN_OR_RETURN(ContainerRecord rec, LoadRecord(*s, id));
    if (rec.state == "Running") rec.state = "Stopped";
    ARCA_RETURN_IF_ERROR(SaveRecord(*s, rec));
    Value v = Value::object();
    v["container"] = id;
    v["state"] = rec.state;
    Emit(v, rec.state + " " + id);
    return kExitOk;
  }

  absl::StatusOr<int> Matrix(const std::string& profiles_arg) {
    std::vector<Profile> profiles;
    std::stringstream ss(profiles_arg);
    std::string item;
    while (std::getline(ss, item, ',')) {
      std::optional<Profile> p = ProfileFromName(item);
      if (!p) return Error(ErrorCode::kInvalidArgument, "unknown profile " + item);
      profiles.push_back(*p);
    }
    if (profiles.empty()) return Error(ErrorCode::kInvalidArgument, "no profiles");
    adversary::MatrixReport report =
        adversary::RunMatrix(profiles, g_.seed.value_or(0));
    if (g_.format == Format::kJson) {
      out_ << report.ToJson() << "\n";
    } else {
      out_ << report.ToTable();
    }
    return report.all_passed() ? kExitOk : kExitSecurity;
  }

  absl::StatusOr<int> TcbReport(const std::string& spec_path) {
    ARCA_ASSIGN_OR_RETURN(LoadedSpec ls, LoadSpec(spec_path));
    ccm::TcbAudit arca = ccm::AuditSpec(ls.spec);
    ccm::TcbAudit cit = ccm::ContainerInTeeAudit(ls.spec);
    bool smaller = arca.trusted_byte_count < cit.trusted_byte_count;
    auto to_json = [](const ccm::TcbAudit& a) {
      Value v = Value::object();
      v["trusted"] = a.trusted_components;
      v["untrusted"] = a.untrusted_components;
      v["trusted_bytes"] = a.trusted_byte_count;
      return v;
    };
    Value v = Value::object();
    v["deployment"] = arca.deployment_name;
    v["arca"] = to_json(arca);
    v["container_in_tee"] = to_json(cit);
    v["arca_smaller"] = smaller;
    std::ostringstream text;
    auto line = [&](std::string_view label, const ccm::TcbAudit& a) {
      text << label << ": " << a.trusted_byte_count << " trusted bytes {";
      bool first = true;
      for (const std::string& c : a.trusted_components) {
        text << (first ? "" : ", ") << c;
        first = false;
      }
      text << "}\n";
    };
    text << "deployment " << arca.deployment_name << "\n";
    line("arca            ", arca);
    line("container-in-tee", cit);
    text << (smaller ? "arca trusted set is smaller" : "arca trusted set is NOT smaller");
    Emit(v, text.str());
    return smaller ? kExitOk : kExitSecurity;
  }

  absl::StatusOr<int> PolicyTemplate(const std::string& spec_path, uint64_t min_tcb) {
    ARCA_ASSIGN_OR_RETURN(LoadedSpec ls, LoadSpec(spec_path));
    ARCA_ASSIGN_OR_RETURN(measurement::TrustPolicy policy,
                          ccm::ReferencePolicy(ls.spec, min_tcb));
    out_ << measurement::SavePolicy(policy);
    return kExitOk;
  }

  int Bench(const absl::StatusOr<bench::BenchResult>& r) {
    if (!r.ok()) return Fail(r.status());
    out_ << r->ToJsonLine() << "\n";
    return kExitOk;
  }

  int BenchAttest(const std::string& profile_name, uint64_t count) {
    std::vector<Profile> profiles;
    if (profile_name.empty()) {
      profiles.assign(kAllProfiles.begin(), kAllProfiles.end());
    } else if (std::optional<Profile> p = ProfileFromName(profile_name)) {
      profiles.push_back(*p);
    } else {
      return Fail(Error(ErrorCode::kInvalidArgument, "unknown profile " + profile_name));
    }
    for (Profile p : profiles) {
      if (int code = Bench(bench::BenchAttest(p, count)); code != kExitOk) return code;
    }
    return kExitOk;
  }

 private:
  Globals& g_;
  std::ostream& out_;
  std::ostream& err_;
  std::unique_ptr<Session> session_;
};

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  Globals g;
  std::string format = "text";
  uint64_t seed = 0;

  CLI::App app{"Arca confidential container simulator", "arca"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--state-dir", g.state_dir, "State directory")
      ->envname("ARCA_STATE_DIR");
  CLI::Option* seed_opt = app.add_option("--seed", seed, "Fix all randomness");
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"text", "json"}));

  CLI::App* platform = app.add_subcommand("platform", "Manage simulated platforms");
  platform->require_subcommand(1);
  std::string profile;
  uint64_t tcb = 1;
  CLI::App* pcreate = platform->add_subcommand("create", "Create a platform");
  pcreate->add_option("--profile", profile, "process, tdx or sev")->required();
  pcreate->add_option("--tcb", tcb, "Platform TCB version");
  CLI::App* plist = platform->add_subcommand("list", "List platforms");

  std::string spec_path, platform_id, container, input_hex, in_path, out_path,
      fault, target, profiles = "process,tdx,sev";
  std::optional<uint64_t> fault_tcb;
  uint64_t size = 1024, count = 1000, min_tcb = 0;

  CLI::App* deploy = app.add_subcommand("deploy", "Deploy a container");
  deploy->add_option("--spec", spec_path)->required();
  deploy->add_option("--platform", platform_id)->required();

  CLI::App* attest = app.add_subcommand("attest", "Attest a container afresh");
  attest->add_option("--container", container)->required();

  CLI::App* exec = app.add_subcommand("exec", "Run the workload");
  exec->add_option("--container", container)->required();
  exec->add_option("--input", input_hex, "Hex input");

  CLI::App* seal = app.add_subcommand("seal", "Seal a file for a container");
  CLI::App* unseal = app.add_subcommand("unseal", "Unseal a blob for a container");
  for (CLI::App* sub : {seal, unseal}) {
    sub->add_option("--container", container)->required();
    sub->add_option("--in", in_path)->required();
    sub->add_option("--out", out_path)->required();
  }

  CLI::App* inject = app.add_subcommand("inject", "Arm a host fault");
  inject->add_option("--platform", platform_id);
  inject->add_option("--target", target, "Container id for domain faults");
  inject->add_option("--fault", fault)->required();
  inject->add_option("--tcb", fault_tcb, "downgrade-tcb target value");

  CLI::App* matrix = app.add_subcommand("matrix", "Run the threat matrix");
  matrix->add_option("--profiles", profiles, "Comma-separated profiles");

  CLI::App* tcb_report = app.add_subcommand("tcb-report", "Audit a spec's TCB");
  tcb_report->add_option("--spec", spec_path)->required();

  CLI::App* policy_tmpl =
      app.add_subcommand("policy-template", "Print the reference policy");
  policy_tmpl->add_option("--spec", spec_path)->required();
  policy_tmpl->add_option("--min-tcb", min_tcb);

  CLI::App* teardown = app.add_subcommand("teardown", "Stop a container");
  teardown->add_option("--container", container)->required();

  CLI::App* bench_channel = app.add_subcommand("bench-channel", "Channel throughput");
  bench_channel->add_option("--size", size);
  bench_channel->add_option("--count", count);
  CLI::App* bench_attest = app.add_subcommand("bench-attest", "Attestation latency");
  bench_attest->add_option("--profile", profile);
  bench_attest->add_option("--count", count);
  CLI::App* bench_seal = app.add_subcommand("bench-seal", "Seal/unseal rate");
  bench_seal->add_option("--size", size);
  bench_seal->add_option("--count", count);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (*seed_opt) g.seed = seed;
  g.format = format == "json" ? Format::kJson : Format::kText;

  Runner r(g, out, err);
  if (pcreate->parsed()) return r.Guard([&] { return r.PlatformCreate(profile, tcb); });
  if (plist->parsed()) return r.Guard([&] { return r.PlatformList(); });
  if (deploy->parsed()) return r.Guard([&] { return r.Deploy(spec_path, platform_id); });
  if (attest->parsed()) return r.Guard([&] { return r.Attest(container); });
  if (exec->parsed()) return r.Guard([&] { return r.Exec(container, input_hex); });
  if (seal->parsed()) {
    return r.Guard([&] { return r.Seal(container, in_path, out_path, true); });
  }
  if (unseal->parsed()) {
    return r.Guard([&] { return r.Seal(container, in_path, out_path, false); });
  }
  if (inject->parsed()) {
    return r.Guard([&] { return r.Inject(platform_id, fault, target, fault_tcb); });
  }
  if (matrix->parsed()) return r.Guard([&] { return r.Matrix(profiles); });
  if (tcb_report->parsed()) return r.Guard([&] { return r.TcbReport(spec_path); });
  if (policy_tmpl->parsed()) {
    return r.Guard([&] { return r.PolicyTemplate(spec_path, min_tcb); });
  }
  if (teardown->parsed()) return r.Guard([&] { return r.Teardown(container); });
  if (bench_channel->parsed()) return r.Bench(bench::BenchChannel(size, count));
  if (bench_attest->parsed()) return r.BenchAttest(profile, count);
  if (bench_seal->parsed()) return r.Bench(bench::BenchSeal(size, count));
  err << app.help();
  return kExitUsage;
}

}  // namespace arca::cli
