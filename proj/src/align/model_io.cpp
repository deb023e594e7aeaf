// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "neurorep/align/model_io.hpp"

#include <bit>
#include <cstring>
#include <map>

#include "json.hpp"
#include "neurorep/error.hpp"
#include "neurorep/io.hpp"

namespace neurorep::align {

namespace {

constexpr std::uint32_t kVersion = 1;

class Writer {
 public:
  void u8(std::uint8_t v) { out.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double d) {
    const auto v = std::bit_cast<std::uint64_t>(d);
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void begin_entry(std::string_view name) {
    bytes(name);
    ++count;
  }
  void bytes(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out.insert(out.end(), s.begin(), s.end());
  }
  void matrix(std::string_view name, const Mat& m) {
    begin_entry(name);
    u8(0);
    u32(static_cast<std::uint32_t>(m.rows()));
    u32(static_cast<std::uint32_t>(m.cols()));
    for (Eigen::Index i = 0; i < m.size(); ++i) f64(m.data()[i]);
  }
  void text(std::string_view name, std::string_view value) {
    begin_entry(name);
    u8(1);
    bytes(value);
  }

  std::vector<std::uint8_t> out;
  std::uint32_t count = 0;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> b) : b_(b) {}

  void need(std::size_t n) const {
    if (b_.size() - pos_ < n) fail(ErrorKind::format, "model file is truncated");
  }
  std::uint8_t u8() {
    need(1);
    return b_[pos_++];
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }
  double f64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b_[pos_ + i]) << (8 * i);
    pos_ += 8;
    return std::bit_cast<double>(v);
  }
  std::string bytes() {
    const std::uint32_t n = u32();
    need(n);
    std::string s(reinterpret_cast<const char*>(b_.data() + pos_), n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == b_.size(); }

 private:
  std::span<const std::uint8_t> b_;
  std::size_t pos_ = 0;
};

struct Entries {
  std::map<std::string, Mat> matrices;
  std::map<std::string, std::string> texts;

  Mat take(const std::string& name, Eigen::Index rows = -1, Eigen::Index cols = -1) {
    const auto it = matrices.find(name);
    if (it == matrices.end()) fail(ErrorKind::format, "model file lacks '" + name + "'");
    if ((rows >= 0 && it->second.rows() != rows) || (cols >= 0 && it->second.cols() != cols))
      fail(ErrorKind::format, "model entry '" + name + "' has the wrong shape");
    return it->second;
  }
  Vec take_vec(const std::string& name, Eigen::Index n = -1) {
    Mat m = take(name, n, 1);
    return m.col(0);
  }
};

}  // namespace

std::vector<std::uint8_t> serialize_model(const AlignmentModel& m, const Decoder* decoder) {
  nlohmann::ordered_json meta;
  meta["lora_rank"] = m.image.lora_q.rank;
  meta["lora_alpha"] = m.image.lora_q.alpha;
  meta["lora_dropout"] = m.image.lora_q.dropout;
  meta["use_lora"] = m.image.use_lora;
  meta["head_eps"] = m.head.eps;
  meta["head_dropout"] = m.head.dropout;

  Writer w;
  w.out = {'N', 'R', 'A', 'M'};
  w.u32(kVersion);
  w.u32(0);  // entry count, patched below
  w.text("meta", meta.dump());
  const auto& im = m.image;
  w.matrix("image.pos", im.pos);
  w.matrix("image.Wq", im.Wq);
  w.matrix("image.Wk", im.Wk);
  w.matrix("image.Wv", im.Wv);
  w.matrix("image.Wo", im.Wo);
  w.matrix("image.bq", im.bq);
  w.matrix("image.bk", im.bk);
  w.matrix("image.bv", im.bv);
  w.matrix("image.bo", im.bo);
  w.matrix("image.lora_q.A", im.lora_q.A);
  w.matrix("image.lora_q.B", im.lora_q.B);
  w.matrix("image.lora_v.A", im.lora_v.A);
  w.matrix("image.lora_v.B", im.lora_v.B);
  w.matrix("image.Wout", im.Wout);
  w.matrix("image.bout", im.bout);
  w.matrix("text.W", m.text.W);
  w.matrix("text.b", m.text.b);
  w.matrix("query", m.query);
  w.matrix("head.W", m.head.W);
  w.matrix("head.b", m.head.b);
  w.matrix("head.gain_bias", [&] {
    Mat gb(m.head.gain.size(), 2);
    gb.col(0) = m.head.gain;
    gb.col(1) = m.head.bias;
    return gb;
  }());
  if (decoder) {
    std::string vocab;
    for (const auto& word : decoder->vocab.words()) vocab += word + "\n";
    w.text("decoder.vocab", vocab);
    w.matrix("decoder.W", decoder->W);
    w.matrix("decoder.b", decoder->b);
  }
  for (int i = 0; i < 4; ++i) w.out[8 + i] = static_cast<std::uint8_t>(w.count >> (8 * i));
  return std::move(w.out);
}

SavedModel deserialize_model(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "NRAM", 4) != 0) fail(ErrorKind::format, "not a model file");
  Reader r(bytes.subspan(4));
  if (r.u32() != kVersion) fail(ErrorKind::format, "unsupported model file version");
  const std::uint32_t count = r.u32();
  Entries e;
  for (std::uint32_t i = 0; i < count; ++i) {
    std::string name = r.bytes();
    const std::uint8_t kind = r.u8();
    if (kind == 0) {
      const std::uint32_t rows = r.u32(), cols = r.u32();
      r.need(static_cast<std::size_t>(rows) * cols * 8);
      Mat m(rows, cols);
      for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = r.f64();
      e.matrices[name] = std::move(m);
    } else if (kind == 1) {
      e.texts[name] = r.bytes();
    } else {
      fail(ErrorKind::format, "unknown model entry kind");
    }
  }
  if (!r.done()) fail(ErrorKind::format, "trailing bytes in model file");
  if (!e.texts.count("meta")) fail(ErrorKind::format, "model file lacks metadata");

  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(e.texts["meta"]);
  } catch (const nlohmann::json::exception& ex) {
    fail(ErrorKind::format, std::string("bad model metadata: ") + ex.what());
  }
  SavedModel out;
  auto& im = out.model.image;
  const Eigen::Index d = kTokenDim;
  im.pos = e.take("image.pos", kTokens, d);
  im.Wq = e.take("image.Wq", d, d);
  im.Wk = e.take("image.Wk", d, d);
  im.Wv = e.take("image.Wv", d, d);
  im.Wo = e.take("image.Wo", d, d);
  im.bq = e.take_vec("image.bq", d);
  im.bk = e.take_vec("image.bk", d);
  im.bv = e.take_vec("image.bv", d);
  im.bo = e.take_vec("image.bo", d);
  try {
    for (auto* a : {&im.lora_q, &im.lora_v}) {
      a->rank = meta.at("lora_rank").get<int>();
      a->alpha = meta.at("lora_alpha").get<double>();
      a->dropout = meta.at("lora_dropout").get<double>();
    }
    im.use_lora = meta.at("use_lora").get<bool>();
    out.model.head.eps = meta.at("head_eps").get<double>();
    out.model.head.dropout = meta.at("head_dropout").get<double>();
  } catch (const nlohmann::json::exception& ex) {
    fail(ErrorKind::format, std::string("bad model metadata: ") + ex.what());
  }
  im.lora_q.target = LoraTarget::q_proj;
  im.lora_v.target = LoraTarget::v_proj;
  const Eigen::Index r_ = im.lora_q.rank;
  im.lora_q.A = e.take("image.lora_q.A", r_, d);
  im.lora_q.B = e.take("image.lora_q.B", d, r_);
  im.lora_v.A = e.take("image.lora_v.A", r_, d);
  im.lora_v.B = e.take("image.lora_v.B", d, r_);
  im.Wout = e.take("image.Wout", kEmbedDim, d);
  im.bout = e.take_vec("image.bout", kEmbedDim);
  out.model.text.W = e.take("text.W", kEmbedDim, kTextBuckets);
  out.model.text.b = e.take_vec("text.b", kEmbedDim);
  out.model.query = e.take_vec("query", kEmbedDim);
  out.model.head.W = e.take("head.W", -1, kEmbedDim);
  const Eigen::Index p = out.model.head.W.rows();
  out.model.head.b = e.take_vec("head.b", p);
  const Mat gb = e.take("head.gain_bias", p, 2);
  out.model.head.gain = gb.col(0);
  out.model.head.bias = gb.col(1);

  if (e.texts.count("decoder.vocab")) {
    std::vector<std::string> words;
    std::string cur;
    for (char c : e.texts["decoder.vocab"]) {
      if (c == '\n') {
        words.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    Decoder dec;
    dec.vocab = Vocabulary::from_words(std::move(words));
    const auto n = static_cast<Eigen::Index>(dec.vocab.size());
    dec.W = e.take("decoder.W", n, p);
    dec.b = e.take_vec("decoder.b", n);
    out.decoder = std::move(dec);
  }
  return out;
}

void save_model(const std::filesystem::path& path, const AlignmentModel& m, const Decoder* decoder) {
  write_binary_file(path, serialize_model(m, decoder));
}

SavedModel load_model(const std::filesystem::path& path) { return deserialize_model(read_binary_file(path)); }

}  // namespace neurorep::align
