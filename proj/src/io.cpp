#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "rcm/report.hpp"

namespace rcm {

namespace {

json env_header(const Environment& env) {
  const Box& bx = env.box();
  json h;
  h["format_version"] = 1;
  h["kind"] = "rcm-environment";
  h["d"] = bx.dim();
  h["L"] = bx.half_width();
  h["boundary"] = to_string(bx.boundary());
  h["side"] = bx.side();
  h["model"] = env.meta().model;
  h["s"] = env.meta().s;
  h["xi_spec"] = env.meta().xi_spec;
  h["seed"] = env.meta().seed;
  h["lmax"] = env.jump_cutoff();
  h["non_paper"] = env.meta().non_paper;
  h["id"] = env.meta().id;
  return h;
}

EnvMeta meta_from_header(const json& h) {
  EnvMeta m;
  m.model = h.value("model", "");
  m.s = h.value("s", 0.0);
  m.xi_spec = h.value("xi_spec", "");
  m.seed = h.value("seed", std::uint64_t{0});
  m.non_paper = h.value("non_paper", false);
  m.id = h.value("id", "");
  return m;
}

Box box_from_header(const json& h) {
  const int d = h.at("d").get<int>();
  const std::string b = h.at("boundary").get<std::string>();
  const int side = h.at("side").get<int>();
  return Box(d, b == "torus" ? Boundary::torus : Boundary::box, side);
}

// all records, in-box and exit, merged in lexicographic (x, y) order
std::vector<EdgeRecord> merged_records(const Environment& env) {
  std::vector<EdgeRecord> all = env.edges();
  all.insert(all.end(), env.exit_edges().begin(), env.exit_edges().end());
  std::sort(all.begin(), all.end(), [](const EdgeRecord& a, const EdgeRecord& b) {
    if (!(a.x == b.x)) return a.x < b.x;
    return a.y < b.y;
  });
  return all;
}

constexpr char kBinaryMagic[8] = {'R', 'C', 'M', 'E', 'N', 'V', '1', '\n'};

}  // namespace

void Environment::save_jsonl(const std::string& path) const {
  std::ostringstream os;
  os << env_header(*this).dump() << "\n";
  for (const auto& e : merged_records(*this)) {
    json rec;
    json x = json::array(), y = json::array();
    for (int i = 0; i < box_.dim(); ++i) {
      x.push_back(e.x[i]);
      y.push_back(e.y[i]);
    }
    rec["x"] = x;
    rec["y"] = y;
    rec["c"] = e.c;
    os << rec.dump() << "\n";
  }
  atomic_write(path, os.str());
}

void Environment::save_binary(const std::string& path) const {
  std::ostringstream os;
  os.write(kBinaryMagic, sizeof kBinaryMagic);
  const std::string header = env_header(*this).dump();
  const std::uint32_t hlen = static_cast<std::uint32_t>(header.size());
  os.write(reinterpret_cast<const char*>(&hlen), sizeof hlen);
  os.write(header.data(), static_cast<std::streamsize>(header.size()));
  const auto recs = merged_records(*this);
  const std::uint64_t count = recs.size();
  os.write(reinterpret_cast<const char*>(&count), sizeof count);
  for (const auto& e : recs) {
    for (int i = 0; i < box_.dim(); ++i) {
      const std::int32_t v = e.x[i];
      os.write(reinterpret_cast<const char*>(&v), sizeof v);
    }
    for (int i = 0; i < box_.dim(); ++i) {
      const std::int32_t v = e.y[i];
      os.write(reinterpret_cast<const char*>(&v), sizeof v);
    }
    os.write(reinterpret_cast<const char*>(&e.c), sizeof e.c);
  }
  atomic_write(path, os.str());
}

Environment Environment::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("Environment::load: cannot open " + path);
  char magic[8] = {};
  in.read(magic, sizeof magic);
  if (in.gcount() == 8 && std::memcmp(magic, kBinaryMagic, 8) == 0) {
    std::uint32_t hlen = 0;
    in.read(reinterpret_cast<char*>(&hlen), sizeof hlen);
    std::string header(hlen, '\0');
    in.read(header.data(), hlen);
    const json h = json::parse(header);
    const Box bx = box_from_header(h);
    std::uint64_t count = 0;
    in.read(reinterpret_cast<char*>(&count), sizeof count);
    std::vector<EdgeRecord> edges;
    edges.reserve(count);
    for (std::uint64_t k = 0; k < count; ++k) {
      EdgeRecord e;
      e.x.d = bx.dim();
      e.y.d = bx.dim();
      for (int i = 0; i < bx.dim(); ++i) {
        std::int32_t v = 0;
        in.read(reinterpret_cast<char*>(&v), sizeof v);
        e.x[i] = v;
      }
      for (int i = 0; i < bx.dim(); ++i) {
        std::int32_t v = 0;
        in.read(reinterpret_cast<char*>(&v), sizeof v);
        e.y[i] = v;
      }
      in.read(reinterpret_cast<char*>(&e.c), sizeof e.c);
      edges.push_back(e);
    }
    if (!in) throw std::runtime_error("Environment::load: truncated binary file");
    return from_edges(bx, std::move(edges), meta_from_header(h), h.value("lmax", 0.0));
  }

  in.clear();
  in.seekg(0);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("Environment::load: empty file " + path);
  const json h = json::parse(line);
  if (h.value("kind", "") != "rcm-environment")
    throw std::runtime_error("Environment::load: not an environment file");
  const Box bx = box_from_header(h);
  std::vector<EdgeRecord> edges;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json rec = json::parse(line);
    EdgeRecord e;
    e.x.d = bx.dim();
    e.y.d = bx.dim();
    for (int i = 0; i < bx.dim(); ++i) {
      e.x[i] = rec.at("x").at(static_cast<std::size_t>(i)).get<int>();
      e.y[i] = rec.at("y").at(static_cast<std::size_t>(i)).get<int>();
    }
    e.c = rec.at("c").get<double>();
    edges.push_back(e);
  }
  return from_edges(bx, std::move(edges), meta_from_header(h), h.value("lmax", 0.0));
}

}  // namespace rcm
