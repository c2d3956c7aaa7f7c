#include "manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <memory>
#include <stdexcept>

#include "imdd/kernels.hpp"
#include "imdd/simulator.hpp"

#ifndef IMDD_VERSION
#define IMDD_VERSION "0.0.0"
#endif

namespace imdd::cli {

RunManifest::RunManifest(std::string subcommand)
    : subcommand_(std::move(subcommand)), started_(std::chrono::steady_clock::now()) {}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string() + " for hashing");
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  std::array<char, 1 << 14> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned i = 0; i < len; ++i) {
    hex.push_back(kHex[md[i] >> 4]);
    hex.push_back(kHex[md[i] & 0xF]);
  }
  return hex;
}

nlohmann::json RunManifest::to_json() const {
  using nlohmann::json;
  const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started_).count();
  json outputs = json::array();
  for (const auto& p : outputs_) outputs.push_back({{"path", p.string()}, {"sha256", sha256_file(p)}});
  return json{{"subcommand", subcommand_},
              {"parameters", parameters_},
              {"seeds", seeds_},
              {"tool_version", IMDD_VERSION},
              {"detection_kernel", std::string(kernels::to_string(kernels::active_isa()))},
              {"gaussian_method", std::string(simulator::kGaussianMethod)},
              {"wall_time_s", elapsed},
              {"outputs", outputs}};
}

std::filesystem::path RunManifest::write(const std::filesystem::path& explicit_path) const {
  std::filesystem::path path = explicit_path;
  if (path.empty()) {
    if (outputs_.empty()) return {};
    path = outputs_.front();
    path += ".manifest.json";
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write manifest " + path.string());
  out << to_json().dump(2) << "\n";
  return path;
}

}  // namespace imdd::cli
