#include "ellink/neural/checkpoint.hpp"

#include "ellink/error.hpp"

namespace ellink::neural {

using nlohmann::json;

json config_to_json(const EncoderConfig& cfg) {
  return {{"d_model", cfg.d_model},
          {"layers", cfg.layers},
          {"heads", cfg.heads},
          {"max_seq_len", cfg.max_seq_len},
          {"vocab_size", cfg.vocab_size}};
}

EncoderConfig config_from_json(const json& j) {
  EncoderConfig cfg;
  cfg.d_model = j.at("d_model").get<int>();
  cfg.layers = j.at("layers").get<int>();
  cfg.heads = j.at("heads").get<int>();
  cfg.max_seq_len = j.at("max_seq_len").get<int>();
  cfg.vocab_size = j.at("vocab_size").get<int>();
  return cfg;
}

json params_to_json(const EncoderParams& params) {
  json out = json::object();
  for_each_tensor(const_cast<EncoderParams&>(params),
                  [&](const std::string& name, Matrix& t) {
                    out[name] = {{"rows", t.rows}, {"cols", t.cols}, {"data", t.data}};
                  });
  return out;
}

EncoderParams params_from_json(const json& j, const EncoderConfig& cfg) {
  EncoderParams params = make_params(cfg);
  for_each_tensor(params, [&](const std::string& name, Matrix& t) {
    if (!j.contains(name)) throw ParseError("checkpoint missing tensor " + name);
    const json& tj = j[name];
    if (tj.at("rows").get<int>() != t.rows || tj.at("cols").get<int>() != t.cols) {
      throw ParseError("checkpoint tensor " + name + " has wrong shape");
    }
    t.data = tj.at("data").get<std::vector<double>>();
    if (t.data.size() != static_cast<std::size_t>(t.rows) * static_cast<std::size_t>(t.cols)) {
      throw ParseError("checkpoint tensor " + name + " has wrong element count");
    }
  });
  return params;
}

json model_to_json(const EncoderModel& model) {
  return {{"config", config_to_json(model.config)},
          {"vocab", model.vocab.to_json()},
          {"params", params_to_json(model.params)}};
}

EncoderModel model_from_json(const json& j) {
  EncoderModel model;
  model.config = config_from_json(j.at("config"));
  model.vocab = Vocabulary::from_json(j.at("vocab"));
  if (model.vocab.size() != model.config.vocab_size) {
    throw ParseError("checkpoint vocab size disagrees with config");
  }
  model.params = params_from_json(j.at("params"), model.config);
  return model;
}

}  // namespace ellink::neural
