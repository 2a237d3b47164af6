#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fbms/errors.hpp"
#include "fbms/mesh.hpp"

namespace fbms {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

double to_double(std::string_view tok, int line_no) {
  // std::from_chars for double is available in libstdc++ 11.
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError("line " + std::to_string(line_no) + ": bad number '" + std::string(tok) + "'");
  return v;
}

long to_long(std::string_view tok, int line_no) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError("line " + std::to_string(line_no) + ": bad integer '" + std::string(tok) + "'");
  return v;
}

struct Lines {
  std::vector<std::pair<int, std::string_view>> items;
};

// Non-empty lines with '#' comments stripped, paired with 1-based line numbers.
Lines content_lines(std::string_view text) {
  Lines out;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    std::string_view line = text.substr(pos, end - pos);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (!split_ws(line).empty()) out.items.emplace_back(line_no, line);
    pos = end + 1;
  }
  return out;
}

// Drops vertices that no triangle references and renumbers the rest.
void compact(std::vector<Vec3>& vertices, std::vector<Triangle>& triangles) {
  std::vector<int> remap(vertices.size(), -1);
  for (const auto& t : triangles)
    for (int v : t) remap[static_cast<std::size_t>(v)] = 0;
  int next = 0;
  std::vector<Vec3> kept;
  for (std::size_t v = 0; v < vertices.size(); ++v) {
    if (remap[v] < 0) continue;
    remap[v] = next++;
    kept.push_back(vertices[v]);
  }
  for (auto& t : triangles)
    for (int& v : t) v = remap[static_cast<std::size_t>(v)];
  vertices = std::move(kept);
}

void parse_off(std::string_view text, std::vector<Vec3>& vertices, std::vector<Triangle>& triangles) {
  const Lines lines = content_lines(text);
  std::vector<std::string_view> tokens;
  std::vector<int> token_line;
  for (const auto& [no, line] : lines.items)
    for (auto tok : split_ws(line)) {
      tokens.push_back(tok);
      token_line.push_back(no);
    }
  std::size_t i = 0;
  if (tokens.empty() || tokens[0] != "OFF") throw ParseError("missing OFF header");
  ++i;
  if (tokens.size() < i + 3) throw ParseError("missing OFF counts");
  const long nv = to_long(tokens[i], token_line[i]);
  const long nf = to_long(tokens[i + 1], token_line[i + 1]);
  i += 3;
  if (nv < 0 || nf < 0) throw ParseError("negative element count");

  // Faces may carry trailing color values, so faces are parsed line by line.
  std::size_t line_idx = 0;
  while (line_idx < lines.items.size() && token_line[i - 1] != lines.items[line_idx].first) ++line_idx;
  ++line_idx;
  for (long v = 0; v < nv; ++v, ++line_idx) {
    if (line_idx >= lines.items.size()) throw ParseError("file ends inside the vertex list");
    const auto& [no, line] = lines.items[line_idx];
    auto tok = split_ws(line);
    if (tok.size() < 3) throw ParseError("line " + std::to_string(no) + ": vertex needs 3 coordinates");
    vertices.emplace_back(to_double(tok[0], no), to_double(tok[1], no), to_double(tok[2], no));
  }
  for (long f = 0; f < nf; ++f, ++line_idx) {
    if (line_idx >= lines.items.size()) throw ParseError("file ends inside the face list");
    const auto& [no, line] = lines.items[line_idx];
    auto tok = split_ws(line);
    const long n = to_long(tok[0], no);
    if (n != 3) throw ParseError("line " + std::to_string(no) + ": only triangular faces are supported");
    if (tok.size() < 4) throw ParseError("line " + std::to_string(no) + ": face needs 3 indices");
    Triangle t{};
    for (int k = 0; k < 3; ++k) {
      const long idx = to_long(tok[static_cast<std::size_t>(k + 1)], no);
      if (idx < 0 || idx >= nv) throw ParseError("line " + std::to_string(no) + ": vertex index out of range");
      t[static_cast<std::size_t>(k)] = static_cast<int>(idx);
    }
    triangles.push_back(t);
  }
}

void parse_obj(std::string_view text, std::vector<Vec3>& vertices, std::vector<Triangle>& triangles) {
  for (const auto& [no, line] : content_lines(text).items) {
    auto tok = split_ws(line);
    if (tok[0] == "v") {
      if (tok.size() < 4) throw ParseError("line " + std::to_string(no) + ": vertex needs 3 coordinates");
      vertices.emplace_back(to_double(tok[1], no), to_double(tok[2], no), to_double(tok[3], no));
    } else if (tok[0] == "f") {
      if (tok.size() != 4) throw ParseError("line " + std::to_string(no) + ": only triangular faces are supported");
      Triangle t{};
      for (int k = 0; k < 3; ++k) {
        std::string_view ref = tok[static_cast<std::size_t>(k + 1)];
        ref = ref.substr(0, ref.find('/'));
        long idx = to_long(ref, no);
        const long count = static_cast<long>(vertices.size());
        if (idx < 0) idx += count;
        else idx -= 1;
        if (idx < 0 || idx >= count)
          throw ParseError("line " + std::to_string(no) + ": vertex index out of range");
        t[static_cast<std::size_t>(k)] = static_cast<int>(idx);
      }
      triangles.push_back(t);
    }
  }
}

}  // namespace

std::optional<MeshFormat> mesh_format_from_string(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (!lower.empty() && lower[0] == '.') lower.erase(0, 1);
  if (lower == "off") return MeshFormat::off;
  if (lower == "obj") return MeshFormat::obj;
  return std::nullopt;
}

TriangulatedSurface parse_mesh(std::string_view text, MeshFormat format) {
  std::vector<Vec3> vertices;
  std::vector<Triangle> triangles;
  if (format == MeshFormat::off) parse_off(text, vertices, triangles);
  else parse_obj(text, vertices, triangles);
  if (triangles.empty()) throw ParseError("mesh has no faces");
  compact(vertices, triangles);
  return TriangulatedSurface::build(std::move(vertices), std::move(triangles));
}

TriangulatedSurface load_mesh(const std::filesystem::path& path, std::optional<MeshFormat> format) {
  if (!format) format = mesh_format_from_string(path.extension().string());
  if (!format) throw ParseError("cannot infer mesh format of " + path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_mesh(buf.str(), *format);
}

std::string to_off(const TriangulatedSurface& surface) {
  std::string out = "OFF\n" + std::to_string(surface.num_vertices()) + " " +
                    std::to_string(surface.num_faces()) + " 0\n";
  char buf[96];
  for (const auto& p : surface.vertices()) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", p[0], p[1], p[2]);
    out += buf;
  }
  for (const auto& t : surface.triangles()) {
    std::snprintf(buf, sizeof buf, "3 %d %d %d\n", t[0], t[1], t[2]);
    out += buf;
  }
  return out;
}

void save_off(const TriangulatedSurface& surface, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path.string());
  out << to_off(surface);
}

}  // namespace fbms
