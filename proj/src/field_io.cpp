#include "field_io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace wigcur {

namespace fs = std::filesystem;

uint64_t fnv1a64(const std::string& bytes) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string format_g9(double v) {
  if (v == 0.0) v = 0.0;  // normalize -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

uint64_t write_text_file(const std::string& content, const std::string& path) {
  const fs::path target(path);
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw IoError("rename failed for " + target.string() + ": " + ec.message());
  return fnv1a64(content);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

void append_header(std::string& out, const Grid& g, const FieldFileMeta& meta,
                   const char* kind, const char* columns) {
  out += "# wigcur field v1\n";
  out += "# name: " + meta.name + "\n";
  out += std::string("# kind: ") + kind + "\n";
  out += "# nx: " + std::to_string(g.nx) + "\n";
  out += "# np: " + std::to_string(g.np) + "\n";
  out += "# x_min: " + format_g9(g.x_min) + "\n";
  out += "# x_max: " + format_g9(g.x_max) + "\n";
  out += "# p_min: " + format_g9(g.p_min) + "\n";
  out += "# p_max: " + format_g9(g.p_max) + "\n";
  out += "# provenance: " + meta.provenance + "\n";
  out += "# scale_factor: " + format_g9(meta.scale_factor) + "\n";
  out += std::string("# columns: ") + columns + "\n";
}

struct ParsedHeader {
  Grid grid;
  std::string kind;
};

ParsedHeader parse_header_and_rows(const std::string& path, std::vector<std::string>& rows) {
  const std::string content = read_text_file(path);
  std::istringstream in(content);
  std::string line;
  int nx = 0, np = 0;
  double x_min = 0, x_max = 0, p_min = 0, p_max = 0;
  std::string kind;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto colon = line.find(':');
      if (colon == std::string::npos) continue;
      std::string key = line.substr(1, colon - 1);
      std::string value = line.substr(colon + 1);
      auto trim = [](std::string& s) {
        const auto b = s.find_first_not_of(" \t");
        const auto e = s.find_last_not_of(" \t\r");
        s = (b == std::string::npos) ? "" : s.substr(b, e - b + 1);
      };
      trim(key);
      trim(value);
      if (key == "nx") nx = std::stoi(value);
      else if (key == "np") np = std::stoi(value);
      else if (key == "x_min") x_min = std::stod(value);
      else if (key == "x_max") x_max = std::stod(value);
      else if (key == "p_min") p_min = std::stod(value);
      else if (key == "p_max") p_max = std::stod(value);
      else if (key == "kind") kind = value;
      continue;
    }
    rows.push_back(line);
  }
  if (nx < 4 || np < 4 || !(x_max > x_min) || !(p_max > p_min)) {
    throw IoError(path + ": invalid or missing lattice header");
  }
  ParsedHeader h;
  h.grid.nx = nx;
  h.grid.np = np;
  h.grid.x_min = x_min;
  h.grid.x_max = x_max;
  h.grid.p_min = p_min;
  h.grid.p_max = p_max;
  h.grid.hx = (x_max - x_min) / (nx - 1);
  h.grid.hp = (p_max - p_min) / (np - 1);
  h.kind = kind;
  if (rows.size() != static_cast<size_t>(h.grid.size())) {
    throw IoError(path + ": row count does not match lattice");
  }
  return h;
}

}  // namespace

uint64_t write_scalar_field(const ScalarField& f, const FieldFileMeta& meta,
                            const std::string& path) {
  validate_finite(f, "write_scalar_field");
  const Grid& g = f.grid;
  std::string out;
  out.reserve(static_cast<size_t>(g.size()) * 32 + 256);
  append_header(out, g, meta, "scalar", "x p value");
  for (int ix = 0; ix < g.nx; ++ix) {
    const std::string xs = format_g9(g.x(ix));
    for (int ip = 0; ip < g.np; ++ip) {
      out += xs;
      out += ' ';
      out += format_g9(g.p(ip));
      out += ' ';
      out += format_g9(f.at(ix, ip));
      out += '\n';
    }
  }
  return write_text_file(out, path);
}

uint64_t write_vector_field(const VectorField& j, const FieldFileMeta& meta,
                            const std::string& path) {
  validate_finite(j, "write_vector_field");
  const Grid& g = j.grid;
  std::string out;
  out.reserve(static_cast<size_t>(g.size()) * 44 + 256);
  append_header(out, g, meta, "vector", "x p jx jp");
  for (int ix = 0; ix < g.nx; ++ix) {
    const std::string xs = format_g9(g.x(ix));
    for (int ip = 0; ip < g.np; ++ip) {
      const int k = g.index(ix, ip);
      out += xs;
      out += ' ';
      out += format_g9(g.p(ip));
      out += ' ';
      out += format_g9(j.jx[k]);
      out += ' ';
      out += format_g9(j.jp[k]);
      out += '\n';
    }
  }
  return write_text_file(out, path);
}

ScalarField read_scalar_field(const std::string& path) {
  std::vector<std::string> rows;
  const ParsedHeader h = parse_header_and_rows(path, rows);
  if (h.kind != "scalar") throw IoError(path + ": expected a scalar field");
  ScalarField f = make_scalar_field(h.grid);
  for (size_t k = 0; k < rows.size(); ++k) {
    double x, p, v;
    if (std::sscanf(rows[k].c_str(), "%lf %lf %lf", &x, &p, &v) != 3) {
      throw IoError(path + ": malformed row " + std::to_string(k));
    }
    f.values[k] = v;
  }
  validate_finite(f, path.c_str());
  return f;
}

VectorField read_vector_field(const std::string& path) {
  std::vector<std::string> rows;
  const ParsedHeader h = parse_header_and_rows(path, rows);
  if (h.kind != "vector") throw IoError(path + ": expected a vector field");
  VectorField j = make_vector_field(h.grid);
  for (size_t k = 0; k < rows.size(); ++k) {
    double x, p, vx, vp;
    if (std::sscanf(rows[k].c_str(), "%lf %lf %lf %lf", &x, &p, &vx, &vp) != 4) {
      throw IoError(path + ": malformed row " + std::to_string(k));
    }
    j.jx[k] = vx;
    j.jp[k] = vp;
  }
  validate_finite(j, path.c_str());
  return j;
}

}  // namespace wigcur
