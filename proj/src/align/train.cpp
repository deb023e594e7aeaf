// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "neurorep/align/train.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "neurorep/error.hpp"
#include "neurorep/io.hpp"
#include "neurorep/rng.hpp"

namespace neurorep::align {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) fail(ErrorKind::config, std::string(name) + " must be positive");
}

void require_rate(double v, const char* name) {
  if (!(v > 0.0 && v <= 1.0)) fail(ErrorKind::config, std::string(name) + " must be in (0, 1]");
}

template <class T>
void read_field(const nlohmann::json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    fail(ErrorKind::config, std::string("config key '") + key + "' has the wrong type");
  }
}

void reject_unknown(const nlohmann::json& obj, std::initializer_list<const char*> keys, const std::string& where) {
  if (!obj.is_object()) fail(ErrorKind::config, where + " must be an object");
  for (const auto& [k, v] : obj.items()) {
    bool known = false;
    for (const char* key : keys) known = known || k == key;
    if (!known) fail(ErrorKind::config, "unknown config key '" + where + "." + k + "'");
  }
}

std::span<double> span_of(Mat& m) { return {m.data(), static_cast<std::size_t>(m.size())}; }
std::span<double> span_of(Vec& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

// Slice embeddings, one forward cache per slice.
Mat slice_embeddings(const ImageEncoder& enc, const PatientSample& s, bool train_mode, std::uint64_t seed,
                     std::vector<ImageCache>* caches) {
  if (s.tokens.empty()) fail(ErrorKind::input, s.patient_id + ": no slices");
  Mat E(static_cast<Eigen::Index>(s.tokens.size()), enc.Wout.rows());
  if (caches) caches->resize(s.tokens.size());
  for (std::size_t j = 0; j < s.tokens.size(); ++j)
    E.row(static_cast<Eigen::Index>(j)) =
        encode_tokens(enc, s.tokens[j], train_mode, derive_seed(seed, {j}), caches ? &(*caches)[j] : nullptr)
            .transpose();
  return E;
}

double query_loss_from(const Mat& E, const Vec& query, const Vec& t, Vec* d_query) {
  const Aggregate agg = attention_aggregate(E, query);
  const CosineGrad cg = cosine_embedding_loss_grad(agg.output, t, 1);
  if (d_query) *d_query += attention_aggregate_backward(E, query, agg, cg.d1).d_context;
  return cg.loss;
}

}  // namespace

void TrainConfig::validate() const {
  require_positive(phase1.epochs, "phase1.epochs");
  require_positive(phase1.batch, "phase1.batch");
  require_positive(phase1.lr, "phase1.lr");
  require_positive(phase1.weight_decay, "phase1.weight_decay");
  require_positive(phase1.early_stop_patience, "phase1.early_stop_patience");
  require_positive(phase1.clip_norm, "phase1.clip_norm");
  if (phase1.cosine_target != 1) fail(ErrorKind::config, "phase1.cosine_target must be 1");
  require_positive(phase1.plateau_patience, "phase1.plateau_patience");
  require_rate(phase1.plateau_factor, "phase1.plateau_factor");
  require_positive(phase2.epochs, "phase2.epochs");
  require_positive(phase2.batch, "phase2.batch");
  require_positive(phase2.lr, "phase2.lr");
  require_positive(phase2.weight_decay, "phase2.weight_decay");
  require_positive(phase2.early_stop_patience, "phase2.early_stop_patience");
  require_positive(phase2.plateau_patience, "phase2.plateau_patience");
  require_rate(phase2.plateau_factor, "phase2.plateau_factor");
  require_positive(phase2.max_tokens, "phase2.max_tokens");
  require_rate(phase2.proj_dropout, "phase2.proj_dropout");
  if (phase2.proj_dropout >= 1.0) fail(ErrorKind::config, "phase2.proj_dropout must be < 1");
  require_positive(phase2.noise_sigma, "phase2.noise_sigma");
  require_rate(phase2.synonym_rate, "phase2.synonym_rate");
  require_positive(phase2.top_k, "phase2.top_k");
  require_rate(phase2.top_p, "phase2.top_p");
  require_positive(phase2.temperature, "phase2.temperature");
  require_positive(phase2.generate_words, "phase2.generate_words");
  require_positive(lora.rank, "lora.rank");
  require_positive(lora.alpha, "lora.alpha");
  require_rate(lora.dropout, "lora.dropout");
  if (lora.dropout >= 1.0) fail(ErrorKind::config, "lora.dropout must be < 1");
}

nlohmann::ordered_json TrainConfig::to_json() const {
  nlohmann::ordered_json j;
  j["phase1"] = {{"epochs", phase1.epochs},
                 {"batch", phase1.batch},
                 {"lr", phase1.lr},
                 {"weight_decay", phase1.weight_decay},
                 {"early_stop_patience", phase1.early_stop_patience},
                 {"clip_norm", phase1.clip_norm},
                 {"cosine_target", phase1.cosine_target},
                 {"plateau_patience", phase1.plateau_patience},
                 {"plateau_factor", phase1.plateau_factor}};
  j["phase2"] = {{"epochs", phase2.epochs},
                 {"batch", phase2.batch},
                 {"lr", phase2.lr},
                 {"weight_decay", phase2.weight_decay},
                 {"early_stop_patience", phase2.early_stop_patience},
                 {"plateau_patience", phase2.plateau_patience},
                 {"plateau_factor", phase2.plateau_factor},
                 {"max_tokens", phase2.max_tokens},
                 {"proj_dropout", phase2.proj_dropout},
                 {"noise_sigma", phase2.noise_sigma},
                 {"synonym_rate", phase2.synonym_rate},
                 {"top_k", phase2.top_k},
                 {"top_p", phase2.top_p},
                 {"temperature", phase2.temperature},
                 {"generate_words", phase2.generate_words}};
  j["lora"] = {{"rank", lora.rank}, {"alpha", lora.alpha}, {"dropout", lora.dropout}};
  j["seed"] = seed;
  return j;
}

TrainConfig TrainConfig::from_json(const nlohmann::json& j) {
  TrainConfig c;
  reject_unknown(j, {"phase1", "phase2", "lora", "seed"}, "train");
  if (j.contains("phase1")) {
    const auto& p = j["phase1"];
    reject_unknown(p,
                   {"epochs", "batch", "lr", "weight_decay", "early_stop_patience", "clip_norm", "cosine_target",
                    "plateau_patience", "plateau_factor"},
                   "phase1");
    read_field(p, "epochs", c.phase1.epochs);
    read_field(p, "batch", c.phase1.batch);
    read_field(p, "lr", c.phase1.lr);
    read_field(p, "weight_decay", c.phase1.weight_decay);
    read_field(p, "early_stop_patience", c.phase1.early_stop_patience);
    read_field(p, "clip_norm", c.phase1.clip_norm);
    read_field(p, "cosine_target", c.phase1.cosine_target);
    read_field(p, "plateau_patience", c.phase1.plateau_patience);
    read_field(p, "plateau_factor", c.phase1.plateau_factor);
  }
  if (j.contains("phase2")) {
    const auto& p = j["phase2"];
    reject_unknown(p,
                   {"epochs", "batch", "lr", "weight_decay", "early_stop_patience", "plateau_patience",
                    "plateau_factor", "max_tokens", "proj_dropout", "noise_sigma", "synonym_rate", "top_k", "top_p",
                    "temperature", "generate_words"},
                   "phase2");
    read_field(p, "epochs", c.phase2.epochs);
    read_field(p, "batch", c.phase2.batch);
    read_field(p, "lr", c.phase2.lr);
    read_field(p, "weight_decay", c.phase2.weight_decay);
    read_field(p, "early_stop_patience", c.phase2.early_stop_patience);
    read_field(p, "plateau_patience", c.phase2.plateau_patience);
    read_field(p, "plateau_factor", c.phase2.plateau_factor);
    read_field(p, "max_tokens", c.phase2.max_tokens);
    read_field(p, "proj_dropout", c.phase2.proj_dropout);
    read_field(p, "noise_sigma", c.phase2.noise_sigma);
    read_field(p, "synonym_rate", c.phase2.synonym_rate);
    read_field(p, "top_k", c.phase2.top_k);
    read_field(p, "top_p", c.phase2.top_p);
    read_field(p, "temperature", c.phase2.temperature);
    read_field(p, "generate_words", c.phase2.generate_words);
  }
  if (j.contains("lora")) {
    const auto& p = j["lora"];
    reject_unknown(p, {"rank", "alpha", "dropout"}, "lora");
    read_field(p, "rank", c.lora.rank);
    read_field(p, "alpha", c.lora.alpha);
    read_field(p, "dropout", c.lora.dropout);
  }
  read_field(j, "seed", c.seed);
  c.validate();
  return c;
}

AlignmentModel make_model(const TrainConfig& cfg) {
  AlignmentModel m;
  m.image = make_image_encoder(cfg.lora.rank, cfg.lora.alpha, cfg.lora.dropout, derive_seed(cfg.seed, {1}));
  m.text = make_text_encoder(derive_seed(cfg.seed, {2}));
  m.query = Vec::Zero(kEmbedDim);
  Rng rng(derive_seed(cfg.seed, {3}));
  m.head = make_projection(kEmbedDim, 2 * kEmbedDim, cfg.phase2.proj_dropout, rng);
  return m;
}

PatientSample make_sample(std::string patient_id, std::span<const mri::Slice2D> slices, std::string report) {
  if (slices.empty()) fail(ErrorKind::input, patient_id + ": no slices");
  PatientSample s;
  s.patient_id = std::move(patient_id);
  for (const auto& sl : slices) s.tokens.push_back(pool_slice(sl));
  if (!report.empty()) s.features = text_features(report);
  s.report = std::move(report);
  return s;
}

AlignmentGrads AlignmentGrads::zeros_like(const AlignmentModel& m) {
  return AlignmentGrads{ImageGrads::zeros_like(m.image), TextGrads::zeros_like(m.text), Vec::Zero(m.query.size())};
}

ParamSpans trainable_params(AlignmentModel& m) {
  return {span_of(m.image.lora_q.A), span_of(m.image.lora_q.B), span_of(m.image.lora_v.A),
          span_of(m.image.lora_v.B), span_of(m.image.Wout),      span_of(m.image.bout),
          span_of(m.text.W),         span_of(m.text.b),          span_of(m.query)};
}

ParamSpans gradient_spans(AlignmentGrads& g) {
  return {span_of(g.image.dAq),   span_of(g.image.dBq), span_of(g.image.dAv),
          span_of(g.image.dBv),   span_of(g.image.dWout), span_of(g.image.dbout),
          span_of(g.text.dW),     span_of(g.text.db),   span_of(g.query)};
}

double patient_loss(const AlignmentModel& m, const PatientSample& s, int cosine_target, bool train_mode,
                    std::uint64_t seed, AlignmentGrads* grads) {
  if (s.features.empty()) fail(ErrorKind::input, s.patient_id + ": no report text");
  std::vector<ImageCache> caches;
  const Mat E = slice_embeddings(m.image, s, train_mode, seed, grads ? &caches : nullptr);
  const Vec t = encode_features(m.text, s.features);
  const Aggregate agg = attention_aggregate(E, t);
  const CosineGrad cg = cosine_embedding_loss_grad(agg.output, t, cosine_target);
  if (grads) {
    const AggregateGrad ag = attention_aggregate_backward(E, t, agg, cg.d1);
    for (std::size_t j = 0; j < caches.size(); ++j)
      encode_tokens_backward(m.image, caches[j], ag.d_embeds.row(static_cast<Eigen::Index>(j)).transpose(),
                             grads->image);
    encode_features_backward(s.features, cg.d2 + ag.d_context, grads->text);
    query_loss_from(E, m.query, t, &grads->query);
  }
  return cg.loss;
}

double query_loss(const AlignmentModel& m, const PatientSample& s, Vec* d_query) {
  if (s.features.empty()) fail(ErrorKind::input, s.patient_id + ": no report text");
  const Mat E = slice_embeddings(m.image, s, false, 0, nullptr);
  return query_loss_from(E, m.query, encode_features(m.text, s.features), d_query);
}

double mean_validation_loss(const AlignmentModel& m, std::span<const PatientSample> val, int cosine_target) {
  if (val.empty()) fail(ErrorKind::config, "validation split is empty");
  double sum = 0.0;
  for (const auto& s : val) sum += patient_loss(m, s, cosine_target, false, 0, nullptr);
  return sum / static_cast<double>(val.size());
}

AlignmentResult train_alignment(std::span<const PatientSample> train, std::span<const PatientSample> val,
                                const TrainConfig& cfg) {
  cfg.validate();
  if (train.empty()) fail(ErrorKind::config, "training split is empty");
  if (val.empty()) fail(ErrorKind::config, "validation split is empty");
  const auto& p1 = cfg.phase1;

  AlignmentResult result;
  AlignmentModel model = make_model(cfg);
  AlignmentGrads grads = AlignmentGrads::zeros_like(model);
  const ParamSpans params = trainable_params(model);
  const ParamSpans gspans = gradient_spans(grads);
  AdamW opt(p1.lr, p1.weight_decay);
  PlateauScheduler sched{p1.plateau_patience, p1.plateau_factor};
  EarlyStopping stopper{p1.early_stop_patience};
  result.model = model;

  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t batch = static_cast<std::size_t>(p1.batch);
  for (int epoch = 1; epoch <= p1.epochs; ++epoch) {
    Rng shuffle(derive_seed(cfg.seed, {0x73687566ULL, static_cast<std::uint64_t>(epoch)}));
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[shuffle.uniform_index(i)]);

    const double lr_used = opt.lr();
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t stop = std::min(order.size(), start + batch);
      for (const auto& g : gspans) std::fill(g.begin(), g.end(), 0.0);
      for (std::size_t i = start; i < stop; ++i) {
        const std::uint64_t seed = derive_seed(cfg.seed, {0x70310000ULL, static_cast<std::uint64_t>(epoch), order[i]});
        loss_sum += patient_loss(model, train[order[i]], p1.cosine_target, true, seed, &grads);
      }
      const double inv = 1.0 / static_cast<double>(stop - start);
      for (const auto& g : gspans)
        for (double& x : g) x *= inv;
      clip_grad_norm(gspans, p1.clip_norm);
      opt.step(params, gspans);
    }

    EpochStats st;
    st.epoch = epoch;
    st.train_loss = loss_sum / static_cast<double>(train.size());
    st.val_loss = mean_validation_loss(model, val, p1.cosine_target);
    st.lr = lr_used;
    result.curve.push_back(st);

    const bool stop = stopper.step(st.val_loss, epoch);
    if (stopper.improved_last) {
      result.model = model;
      result.best_epoch = epoch;
    }
    opt.set_lr(sched.step(st.val_loss, opt.lr()));
    if (stop) {
      result.stopped_early = epoch < p1.epochs;
      break;
    }
  }
  return result;
}

EmbeddingSet embed_patient(const AlignmentModel& m, const PatientSample& s) {
  EmbeddingSet e;
  e.patient_id = s.patient_id;
  e.slice_embeddings = slice_embeddings(m.image, s, false, 0, nullptr);
  if (!s.features.empty()) e.text_embedding = encode_features(m.text, s.features);
  const Aggregate agg = attention_aggregate(e.slice_embeddings, m.query);
  e.weights = agg.weights;
  e.aggregated = agg.output;
  e.projected = project_embedding(e.aggregated, m.head, false, 0);
  if (!e.aggregated.allFinite() || !e.projected.allFinite())
    fail(ErrorKind::numeric, s.patient_id + ": non-finite embedding");
  return e;
}

std::string curve_csv(std::span<const EpochStats> curve) {
  std::ostringstream out;
  out << "epoch,train_loss,val_loss,lr\n";
  for (const auto& c : curve)
    out << c.epoch << ',' << format_double(c.train_loss) << ',' << format_double(c.val_loss) << ','
        << format_double(c.lr) << '\n';
  return out.str();
}

std::string embeddings_jsonl(std::span<const EmbeddingSet> sets) {
  std::string out;
  for (const auto& s : sets) {
    nlohmann::ordered_json j;
    j["patient_id"] = s.patient_id;
    j["aggregated"] = std::vector<double>(s.aggregated.data(), s.aggregated.data() + s.aggregated.size());
    j["projected"] = std::vector<double>(s.projected.data(), s.projected.data() + s.projected.size());
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace neurorep::align
