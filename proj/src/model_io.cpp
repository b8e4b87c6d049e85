#include "esurf/model_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "esurf/errors.hpp"

namespace esurf {

namespace {

constexpr char kMagic[5] = {'E', 'S', 'U', 'R', 'F'};
constexpr std::uint32_t kSpaceFormatVersion = 1;

// Little-endian writer; byte-for-byte deterministic.
struct Writer {
  std::vector<std::uint8_t> bytes;

  void u8(std::uint8_t v) { bytes.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) bytes.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    bytes.insert(bytes.end(), s.begin(), s.end());
  }
  void section(const Writer& payload) {
    u64(payload.bytes.size());
    bytes.insert(bytes.end(), payload.bytes.begin(), payload.bytes.end());
  }
};

struct Reader {
  std::span<const std::uint8_t> bytes;
  std::size_t pos = 0;

  void need(std::size_t n) const {
    if (pos + n > bytes.size()) throw ModelIoError("truncated model file");
  }
  std::uint8_t u8() {
    need(1);
    return bytes[pos++];
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[pos++]) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[pos++]) << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str() {
    const std::uint32_t n = u32();
    need(n);
    std::string s(reinterpret_cast<const char*>(bytes.data() + pos), n);
    pos += n;
    return s;
  }
  Reader section() {
    const std::uint64_t n = u64();
    need(n);
    Reader r{bytes.subspan(pos, n)};
    pos += n;
    return r;
  }
  bool done() const { return pos == bytes.size(); }
};

Writer write_params(const ForestParams& p) {
  Writer w;
  w.u32(p.n_trees);
  w.u32(p.max_depth);
  w.u32(p.min_leaf);
  w.u32(p.features_per_split);
  w.u64(p.seed);
  w.f64(p.decision_threshold);
  return w;
}

ForestParams read_params(Reader& r) {
  ForestParams p;
  p.n_trees = r.u32();
  p.max_depth = r.u32();
  p.min_leaf = r.u32();
  p.features_per_split = r.u32();
  p.seed = r.u64();
  p.decision_threshold = r.f64();
  return p;
}

Writer write_space(const FeatureSpace& space) {
  Writer w;
  w.u32(kSpaceFormatVersion);
  w.u32(space.n_train_docs());
  w.u32(space.bounds().min_docs);
  w.f64(space.bounds().max_doc_fraction);
  w.u64(space.size());
  for (const FeatureSpace::Entry& e : space.entries()) {
    w.u8(static_cast<std::uint8_t>(e.key.kind));
    w.u8(static_cast<std::uint8_t>(e.key.region));
    w.str(e.key.value);
    w.u32(e.doc_freq);
  }
  return w;
}

FeatureSpace read_space(Reader& r) {
  const std::uint32_t version = r.u32();
  if (version != kSpaceFormatVersion)
    throw ModelIoError("unsupported feature-space format version " + std::to_string(version) +
                       " (expected " + std::to_string(kSpaceFormatVersion) + ")");
  const std::uint32_t n_train_docs = r.u32();
  FilterBounds bounds;
  bounds.min_docs = r.u32();
  bounds.max_doc_fraction = r.f64();
  const std::uint64_t n_keys = r.u64();
  std::vector<FeatureSpace::Entry> entries;
  entries.reserve(n_keys);
  for (std::uint64_t i = 0; i < n_keys; ++i) {
    FeatureSpace::Entry e;
    const std::uint8_t kind = r.u8();
    const std::uint8_t region = r.u8();
    if (kind > 1 || region > 2) throw ModelIoError("corrupt feature key in model file");
    e.key.kind = static_cast<FeatureKind>(kind);
    e.key.region = static_cast<Region>(region);
    e.key.value = r.str();
    e.doc_freq = r.u32();
    entries.push_back(std::move(e));
  }
  try {
    return FeatureSpace(std::move(entries), n_train_docs, bounds);
  } catch (const DataError& e) {
    throw ModelIoError(std::string("corrupt feature space: ") + e.what());
  }
}

// Preorder, explicit stack: deep trees must not recurse on the call stack.
void write_tree(const Tree& tree, Writer& w) {
  std::vector<std::uint32_t> stack{0};
  while (!stack.empty()) {
    const std::uint32_t at = stack.back();
    stack.pop_back();
    const Tree::Node& node = tree.nodes[at];
    if (node.is_leaf()) {
      w.u8(0);
      w.u32(node.positive);
      w.u32(node.total);
    } else {
      w.u8(1);
      w.u32(node.feature);
      stack.push_back(node.right);
      stack.push_back(node.left);
    }
  }
}

Tree read_tree(Reader& r, std::uint64_t n_nodes, std::uint32_t n_features) {
  // Every serialized node takes at least 5 bytes; reject absurd counts
  // before reserving.
  if (n_nodes == 0 || n_nodes > r.bytes.size() / 5 + 1)
    throw ModelIoError("corrupt tree section in model file");
  Tree tree;
  tree.nodes.reserve(n_nodes);
  // Pending internal nodes still waiting for a child link.
  std::vector<std::pair<std::uint32_t, int>> pending;
  do {
    const std::uint32_t id = static_cast<std::uint32_t>(tree.nodes.size());
    if (id >= n_nodes) throw ModelIoError("corrupt tree section in model file");
    tree.nodes.emplace_back();
    const std::uint8_t tag = r.u8();
    if (tag == 0) {
      tree.nodes[id].positive = r.u32();
      tree.nodes[id].total = r.u32();
      if (tree.nodes[id].total == 0 || tree.nodes[id].positive > tree.nodes[id].total)
        throw ModelIoError("corrupt leaf counts in model file");
    } else if (tag == 1) {
      const std::uint32_t feature = r.u32();
      if (feature >= n_features) throw ModelIoError("corrupt tree: feature index out of range");
      tree.nodes[id].feature = feature;
    } else {
      throw ModelIoError("corrupt tree node tag in model file");
    }
    if (id != 0) {
      auto& [parent, seen] = pending.back();
      if (seen == 0) {
        tree.nodes[parent].left = id;
        seen = 1;
      } else {
        tree.nodes[parent].right = id;
        pending.pop_back();
      }
    }
    if (tag == 1) pending.emplace_back(id, 0);
  } while (!pending.empty());
  if (tree.nodes.size() != n_nodes) throw ModelIoError("corrupt tree section in model file");
  return tree;
}

}  // namespace

std::vector<std::uint8_t> serialize_model(const ForestModel& model) {
  Writer out;
  out.bytes.insert(out.bytes.end(), kMagic, kMagic + sizeof(kMagic));
  out.u32(kModelFormatVersion);

  out.section(write_params(model.params()));
  out.section(write_space(model.space()));

  Writer trees;
  trees.u64(model.trees().size());
  for (const Tree& tree : model.trees()) {
    Writer one;
    one.u64(tree.nodes.size());
    write_tree(tree, one);
    trees.section(one);
  }
  out.section(trees);
  return std::move(out.bytes);
}

ForestModel deserialize_model(std::span<const std::uint8_t> bytes) {
  Reader r{bytes};
  r.need(sizeof(kMagic));
  if (std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0)
    throw ModelIoError("not an ESURF model file (bad magic)");
  r.pos = sizeof(kMagic);
  const std::uint32_t version = r.u32();
  if (version != kModelFormatVersion)
    throw ModelIoError("unsupported model format version " + std::to_string(version) +
                       " (expected " + std::to_string(kModelFormatVersion) + ")");

  Reader params_section = r.section();
  const ForestParams params = read_params(params_section);
  Reader space_section = r.section();
  FeatureSpace space = read_space(space_section);

  Reader trees_section = r.section();
  const std::uint64_t n_trees = trees_section.u64();
  std::vector<Tree> trees;
  trees.reserve(n_trees);
  for (std::uint64_t t = 0; t < n_trees; ++t) {
    Reader one = trees_section.section();
    const std::uint64_t n_nodes = one.u64();
    Tree tree = read_tree(one, n_nodes, space.size());
    if (!one.done()) throw ModelIoError("corrupt tree section in model file");
    trees.push_back(std::move(tree));
  }
  if (!trees_section.done() || !r.done()) throw ModelIoError("trailing bytes in model file");
  return ForestModel(std::move(trees), params, std::move(space));
}

void save_model(const ForestModel& model, const std::string& path) {
  const std::vector<std::uint8_t> bytes = serialize_model(model);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ModelIoError("cannot open model file for writing: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out.good()) throw ModelIoError("failed to write model file: " + path);
}

ForestModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelIoError("cannot open model file: " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw ModelIoError("failed to read model file: " + path);
  return deserialize_model(bytes);
}

}  // namespace esurf
