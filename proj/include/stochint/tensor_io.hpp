#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "stochint/coefficients.hpp"

namespace stochint {

inline constexpr int kTensorSchemaVersion = 1;

// File layout: one UTF-8 JSON header line terminated by '\n', then the raw
// little-endian float64 payload of (p+1)^k values, j_1 fastest.

namespace detail {

inline void require_little_endian(const char* who) {
  if constexpr (std::endian::native != std::endian::little)
    throw std::runtime_error(std::string(who) + ": only little-endian hosts are supported");
}

}  // namespace detail

inline nlohmann::json tensor_header(const CoefficientTensor& t) {
  return nlohmann::json{{"schema_version", kTensorSchemaVersion},
                        {"basis", to_string(t.basis_kind())},
                        {"k", t.k()},
                        {"p", t.p()},
                        {"weights", t.spec().weights()},
                        {"normalization", to_string(t.normalization())},
                        {"index_order", "j1_fastest"},
                        {"endianness", "little"},
                        {"t", t.spec().interval().t()},
                        {"T", t.spec().interval().T()}};
}

inline void save_tensor(const CoefficientTensor& t, const std::filesystem::path& path) {
  detail::require_little_endian("save_tensor");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_tensor: cannot open " + path.string());
  out << tensor_header(t).dump() << '\n';
  out.write(reinterpret_cast<const char*>(t.values().data()),
            static_cast<std::streamsize>(t.values().size() * sizeof(double)));
  if (!out) throw std::runtime_error("save_tensor: write failed for " + path.string());
}

inline CoefficientTensor load_tensor(const std::filesystem::path& path) {
  detail::require_little_endian("load_tensor");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_tensor: cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("load_tensor: missing header in " + path.string());

  nlohmann::json h;
  try {
    h = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("load_tensor: corrupt header: " + std::string(e.what()));
  }

  const auto field = [&](const char* name) -> const nlohmann::json& {
    if (!h.contains(name))
      throw std::runtime_error(std::string("load_tensor: header missing field '") + name + "'");
    return h.at(name);
  };

  if (field("schema_version").get<int>() != kTensorSchemaVersion)
    throw std::runtime_error("load_tensor: unknown schema version " +
                             field("schema_version").dump());
  const int k = field("k").get<int>();
  if (k < 1 || k > kMaxMultiplicity)
    throw std::runtime_error("load_tensor: unsupported multiplicity " + std::to_string(k) +
                             " (supported: 1..5)");
  const std::string basis_s = field("basis").get<std::string>();
  BasisKind basis;
  if (basis_s == "legendre")
    basis = BasisKind::Legendre;
  else if (basis_s == "trigonometric")
    basis = BasisKind::Trigonometric;
  else
    throw std::runtime_error("load_tensor: unknown basis '" + basis_s + "'");
  const std::string norm_s = field("normalization").get<std::string>();
  Normalization norm;
  if (norm_s == "absolute")
    norm = Normalization::Absolute;
  else if (norm_s == "unit_interval")
    norm = Normalization::UnitInterval;
  else
    throw std::runtime_error("load_tensor: unknown normalization '" + norm_s + "'");
  if (field("index_order").get<std::string>() != "j1_fastest")
    throw std::runtime_error("load_tensor: unsupported index order");
  if (field("endianness").get<std::string>() != "little")
    throw std::runtime_error("load_tensor: unsupported endianness");

  const int p = field("p").get<int>();
  if (p < 0) throw std::runtime_error("load_tensor: invalid p");
  KernelSpec spec(k, field("weights").get<std::vector<int>>(),
                  Interval(field("t").get<double>(), field("T").get<double>()));

  std::size_t n = 1;
  for (int l = 0; l < k; ++l) n *= static_cast<std::size_t>(p + 1);
  std::vector<double> values(n);
  in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(n * sizeof(double)));
  if (static_cast<std::size_t>(in.gcount()) != n * sizeof(double))
    throw std::runtime_error("load_tensor: payload size mismatch, expected " +
                             std::to_string(n * sizeof(double)) + " bytes");
  char extra;
  if (in.read(&extra, 1))
    throw std::runtime_error("load_tensor: payload size mismatch, trailing bytes present");

  return CoefficientTensor(std::move(spec), basis, p, norm, std::move(values));
}

/// CSV export: header row, then one row per multi-index (j_1..j_k, value).
inline void export_csv(const CoefficientTensor& t, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("export_csv: cannot open " + path.string());
  for (int l = 1; l <= t.k(); ++l) out << 'j' << l << ',';
  out << "value\n";
  std::vector<int> j(static_cast<std::size_t>(t.k()), 0);
  char buf[32];
  for (;;) {
    for (int v : j) out << v << ',';
    std::snprintf(buf, sizeof buf, "%.17g", t.at(std::span<const int>(j.data(), j.size())));
    out << buf << '\n';
    int l = 0;
    while (l < t.k() && ++j[static_cast<std::size_t>(l)] > t.p()) j[static_cast<std::size_t>(l++)] = 0;
    if (l == t.k()) break;
  }
  if (!out) throw std::runtime_error("export_csv: write failed for " + path.string());
}

}  // namespace stochint
