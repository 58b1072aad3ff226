#include "arnca/model.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace arnca {

const char* model_kind_name(ModelKind kind) {
    switch (kind) {
    case ModelKind::Arnca: return "arnca";
    case ModelKind::AttentionCa: return "attn_ca";
    case ModelKind::ConvlstmCa: return "convlstm_ca";
    }
    return "?";
}

ModelKind model_kind_from_name(const std::string& name) {
    if (name == "arnca") return ModelKind::Arnca;
    if (name == "attn_ca" || name == "attention_ca") return ModelKind::AttentionCa;
    if (name == "convlstm_ca") return ModelKind::ConvlstmCa;
    throw std::invalid_argument("unknown model kind: " + name);
}

std::string model_config_to_json(const ModelConfig& cfg) {
    nlohmann::json j;
    j["kind"] = model_kind_name(cfg.kind);
    j["env"] = env_name(cfg.env);
    j["u"] = cfg.u;
    j["radius"] = cfg.radius;
    j["recurrent_cell"] = cfg.recurrent == RecurrentKind::Lstm ? "lstm" : "plain_rnn";
    j["attention_scale"] = cfg.attention_scale;
    j["prediction_input"] =
        cfg.prediction_input == PredictionInput::Zeros ? "zeros" : "prob_feedback";
    j["trained_n"] = cfg.trained_n;
    return j.dump(2);
}

ModelConfig model_config_from_json(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    ModelConfig cfg;
    cfg.kind = model_kind_from_name(j.at("kind").get<std::string>());
    cfg.env = env_from_name(j.at("env").get<std::string>());
    cfg.u = j.at("u").get<int>();
    cfg.radius = j.at("radius").get<int>();
    std::string cell = j.at("recurrent_cell").get<std::string>();
    if (cell == "lstm") cfg.recurrent = RecurrentKind::Lstm;
    else if (cell == "plain_rnn") cfg.recurrent = RecurrentKind::PlainRnn;
    else throw std::invalid_argument("unknown recurrent cell: " + cell);
    cfg.attention_scale = j.at("attention_scale").get<bool>();
    std::string pred = j.at("prediction_input").get<std::string>();
    if (pred == "zeros") cfg.prediction_input = PredictionInput::Zeros;
    else if (pred == "prob_feedback") cfg.prediction_input = PredictionInput::ProbFeedback;
    else throw std::invalid_argument("unknown prediction input: " + pred);
    cfg.trained_n = j.value("trained_n", 0);
    return cfg;
}

void save_model_config(const ModelConfig& cfg, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << model_config_to_json(cfg) << "\n";
}

ModelConfig load_model_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return model_config_from_json(text);
}

} // namespace arnca
