#pragma once

// Mask container: one line of JSON header
//   {"dims":[nx,ny,nz],"spacing":[sx,sy,sz],"encoding":"raw8"}
// terminated by '\n', followed by nx*ny*nz bytes in x-fastest order
// (0 = background, nonzero = foreground). The header may instead carry
// "data":"<file>" naming a sibling file that holds the bytes.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "ranksense/error.hpp"
#include "ranksense/label_mask.hpp"

namespace ranksense {

namespace detail {

inline std::vector<char> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline nlohmann::ordered_json mask_header(const LabelMask& mask) {
  const auto& d = mask.dims();
  const auto& s = mask.spacing();
  nlohmann::ordered_json header;
  header["dims"] = {d.nx, d.ny, d.nz};
  header["spacing"] = {s.sx, s.sy, s.sz};
  header["encoding"] = "raw8";
  return header;
}

}  // namespace detail

/// Parses a container from memory. `sibling_dir` resolves a "data" reference.
inline LabelMask parse_mask(std::span<const char> content,
                            const std::filesystem::path& sibling_dir = {}) {
  const auto* begin = content.data();
  const auto* end = begin + content.size();
  const auto* newline = std::find(begin, end, '\n');

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(begin, newline);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("mask header: ") + e.what());
  }

  Dims dims;
  Spacing spacing;
  try {
    const auto& d = header.at("dims");
    const auto& s = header.at("spacing");
    if (!d.is_array() || d.size() != 3 || !s.is_array() || s.size() != 3) {
      throw ParseError("mask header: dims and spacing must be 3-element arrays");
    }
    for (const auto& v : d) {
      if (!v.is_number_integer() || v.get<std::int64_t>() < 1) {
        throw InputError("mask header: dims must be positive integers");
      }
    }
    dims = {d[0].get<std::size_t>(), d[1].get<std::size_t>(), d[2].get<std::size_t>()};
    spacing = {s[0].get<double>(), s[1].get<double>(), s[2].get<double>()};
    if (header.at("encoding").get<std::string>() != "raw8") {
      throw InputError("mask header: unsupported encoding '" +
                       header.at("encoding").get<std::string>() + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("mask header: ") + e.what());
  }

  if (header.contains("data")) {
    const auto raw = detail::read_file_bytes(sibling_dir / header["data"].get<std::string>());
    return {dims, spacing,
            std::span(reinterpret_cast<const std::uint8_t*>(raw.data()), raw.size())};
  }
  if (newline == end) throw ParseError("mask header: missing newline before payload");
  const auto* payload = newline + 1;
  return {dims, spacing,
          std::span(reinterpret_cast<const std::uint8_t*>(payload),
                    static_cast<std::size_t>(end - payload))};
}

inline LabelMask read_mask(const std::filesystem::path& path) {
  const auto bytes = detail::read_file_bytes(path);
  return parse_mask(bytes, path.parent_path());
}

/// Embedded-payload form.
inline std::string serialize_mask(const LabelMask& mask) {
  std::string out = detail::mask_header(mask).dump();
  out.push_back('\n');
  const auto bytes = mask.bytes();
  out.append(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  return out;
}

inline void write_mask(const std::filesystem::path& path, const LabelMask& mask) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  const auto data = serialize_mask(mask);
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
}

/// Sibling-file form: header at `path`, bytes at `data_name` next to it.
inline void write_mask_with_sibling(const std::filesystem::path& path, const std::string& data_name,
                                    const LabelMask& mask) {
  auto header = detail::mask_header(mask);
  header["data"] = data_name;
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path.string() + "'");
    out << header.dump() << '\n';
  }
  std::ofstream raw(path.parent_path() / data_name, std::ios::binary);
  if (!raw) throw InputError("cannot write mask payload next to '" + path.string() + "'");
  const auto bytes = mask.bytes();
  raw.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace ranksense
