#include "output.hpp"

#include "mtkit/digest.hpp"
#include "mtkit/error.hpp"
#include "mtkit/io.hpp"
#include "mtkit/version.hpp"

namespace mtkit::cli {

OutputDir::OutputDir(std::filesystem::path dir, std::string command, std::string config_digest)
    : dir_(std::move(dir)), command_(std::move(command)), config_digest_(std::move(config_digest)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw IoError("cannot create output directory " + dir_.string() + ": " + ec.message());
  // Anything written before finish() belongs to an unfinished run.
  mark_failed(dir_, "run in progress or interrupted\n");
}

void OutputDir::write(const std::string& name, std::string_view contents) {
  io::write_file_atomic(dir_ / name, contents);
  outputs_[name] = sha256_hex(contents);
}

void OutputDir::adopt(const std::string& name) { outputs_[name] = sha256_file(dir_ / name); }

void OutputDir::input(const std::string& label, const std::filesystem::path& file) {
  inputs_[label] = sha256_file(file);
}

void OutputDir::finish() {
  nlohmann::ordered_json run;
  run["command"] = command_;
  run["toolkit"] = std::string(kToolkitId);
  run["config_digest"] = config_digest_;
  for (const auto& [k, v] : info_.items()) run[k] = v;
  run["inputs"] = inputs_;
  run["outputs"] = outputs_;
  io::write_file_atomic(dir_ / "run.json", run.dump(1) + "\n");
  std::filesystem::remove(dir_ / ".failed");
}

void OutputDir::mark_failed(const std::filesystem::path& dir, std::string_view message) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (!ec) io::write_file_atomic(dir / ".failed", message);
}

}  // namespace mtkit::cli
