#include "hsom/config.hpp"

#include <utility>

#include "hsom/error.hpp"
#include "json_io.hpp"

namespace hsom::pipeline {

namespace {

using nlohmann::json;

const char* norm_name(preprocess::ChannelNorm n)
{
    switch (n) {
    case preprocess::ChannelNorm::None: return "none";
    case preprocess::ChannelNorm::Frame: return "frame";
    case preprocess::ChannelNorm::Sequence: return "sequence";
    }
    return "sequence";
}

preprocess::ChannelNorm norm_from(const std::string& s)
{
    if (s == "none")
        return preprocess::ChannelNorm::None;
    if (s == "frame")
        return preprocess::ChannelNorm::Frame;
    if (s == "sequence")
        return preprocess::ChannelNorm::Sequence;
    raise(ErrorCode::InvalidArgument, "channel_norm must be none, frame or sequence");
}

std::vector<JointId> joints_from(const json& j)
{
    std::vector<JointId> out;
    for (const auto& v : j) {
        const auto name = v.get<std::string>();
        const auto id = joint_from_name(name);
        if (!id)
            raise(ErrorCode::InvalidArgument, "unknown joint '" + name + "'");
        out.push_back(*id);
    }
    return out;
}

json joints_to(const std::vector<JointId>& joints)
{
    json out = json::array();
    for (auto j : joints)
        out.push_back(std::string(joint_name(j)));
    return out;
}

json attention_to(const preprocess::AttentionMask& m)
{
    if (m.is_global())
        return json{{"joints", joints_to(m.global_joints())}};
    json classes = json::object();
    for (const auto& [name, joints] : m.class_masks())
        classes[name] = joints_to(joints);
    return json{{"classes", classes}};
}

preprocess::AttentionMask attention_from(const json& j)
{
    if (j.is_string())
        return preprocess::AttentionMask::preset(j.get<std::string>());
    if (j.contains("preset"))
        return preprocess::AttentionMask::preset(j.at("preset").get<std::string>());
    if (j.contains("joints"))
        return preprocess::AttentionMask::global(joints_from(j.at("joints")));
    if (j.contains("classes")) {
        preprocess::MaskTable table;
        for (const auto& [name, joints] : j.at("classes").items())
            table[name] = joints_from(joints);
        return preprocess::AttentionMask::per_class(std::move(table));
    }
    raise(ErrorCode::InvalidArgument, "attention needs 'preset', 'joints' or 'classes'");
}

json layer_to(const LayerConfig& l)
{
    return json{{"rows", l.rows},
                {"cols", l.cols},
                {"activation_sigma", l.activation_sigma},
                {"schedule", detail::to_json(l.schedule)}};
}

LayerConfig layer_from(const json& j, LayerConfig l)
{
    const auto epochs = l.schedule.epochs;
    if (j.contains("rows") || j.contains("cols")) {
        l.rows = j.value("rows", l.rows);
        l.cols = j.value("cols", l.cols);
        l.schedule = som::Schedule::standard(l.rows, l.cols, epochs);
    }
    for (const auto& [key, value] : j.items()) {
        if (key == "rows" || key == "cols")
            continue;
        if (key == "activation_sigma")
            l.activation_sigma = value.get<double>();
        else if (key == "schedule")
            l.schedule = detail::schedule_from_json(value, l.schedule);
        else
            raise(ErrorCode::InvalidArgument, "unknown layer key '" + key + "'");
    }
    if (l.rows == 0 || l.cols == 0)
        raise(ErrorCode::InvalidArgument, "layer grid must be non-empty");
    l.schedule.validate();
    return l;
}

} // namespace

} // namespace hsom::pipeline

namespace hsom::detail {

nlohmann::json to_json(const pipeline::Config& c)
{
    using nlohmann::json;
    json joint_order = json::array();
    for (const auto& n : c.joint_order)
        joint_order.push_back(n);
    const auto& p = c.preprocess;
    return json{
        {"seed", c.seed},
        {"train_fraction", c.train_fraction},
        {"joint_order", joint_order},
        {"preprocess",
         {{"up", {p.up.x, p.up.y, p.up.z}},
          {"canonical_length", p.canonical_length},
          {"channels", p.channels.to_string()},
          {"channel_norm", pipeline::norm_name(p.norm)},
          {"attention", pipeline::attention_to(p.mask)},
          {"union_mask", p.union_mask}}},
        {"layer1", pipeline::layer_to(c.layer1)},
        {"layer2", pipeline::layer_to(c.layer2)},
        {"output",
         {{"beta", c.beta},
          {"update_rule", c.update_rule == classifier::UpdateRule::Delta ? "delta" : "printed"},
          {"input", c.classifier_input == pipeline::ClassifierInput::Stretched ? "stretched" : "raw"},
          {"phase2", c.phase2 == pipeline::Phase2Mode::Interleaved ? "interleaved" : "sequential"},
          {"epochs", c.output_epochs}}},
    };
}

pipeline::Config config_from_json(const nlohmann::json& j, pipeline::Config c)
{
    using namespace pipeline;
    if (!j.is_object())
        raise(ErrorCode::InvalidArgument, "config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (key == "seed")
            c.seed = value.get<std::uint64_t>();
        else if (key == "train_fraction")
            c.train_fraction = value.get<double>();
        else if (key == "joint_order")
            c.joint_order = value.get<std::vector<std::string>>();
        else if (key == "preprocess") {
            auto& p = c.preprocess;
            for (const auto& [pk, pv] : value.items()) {
                if (pk == "up") {
                    const auto v = pv.get<std::vector<double>>();
                    if (v.size() != 3)
                        raise(ErrorCode::InvalidArgument, "up must have 3 components");
                    p.up = {v[0], v[1], v[2]};
                } else if (pk == "canonical_length")
                    p.canonical_length = pv.get<double>();
                else if (pk == "channels")
                    p.channels = preprocess::ChannelSet::parse(pv.get<std::string>());
                else if (pk == "channel_norm")
                    p.norm = norm_from(pv.get<std::string>());
                else if (pk == "attention")
                    p.mask = attention_from(pv);
                else if (pk == "union_mask")
                    p.union_mask = pv.get<bool>();
                else
                    raise(ErrorCode::InvalidArgument, "unknown preprocess key '" + pk + "'");
            }
        } else if (key == "layer1")
            c.layer1 = layer_from(value, c.layer1);
        else if (key == "layer2")
            c.layer2 = layer_from(value, c.layer2);
        else if (key == "output") {
            for (const auto& [ok, ov] : value.items()) {
                if (ok == "beta")
                    c.beta = ov.get<double>();
                else if (ok == "update_rule") {
                    const auto s = ov.get<std::string>();
                    if (s != "delta" && s != "printed")
                        raise(ErrorCode::InvalidArgument, "update_rule must be delta or printed");
                    c.update_rule = s == "delta" ? classifier::UpdateRule::Delta : classifier::UpdateRule::Printed;
                } else if (ok == "input") {
                    const auto s = ov.get<std::string>();
                    if (s != "stretched" && s != "raw")
                        raise(ErrorCode::InvalidArgument, "output input must be stretched or raw");
                    c.classifier_input = s == "stretched" ? ClassifierInput::Stretched : ClassifierInput::Raw;
                } else if (ok == "phase2") {
                    const auto s = ov.get<std::string>();
                    if (s != "interleaved" && s != "sequential")
                        raise(ErrorCode::InvalidArgument, "phase2 must be interleaved or sequential");
                    c.phase2 = s == "interleaved" ? Phase2Mode::Interleaved : Phase2Mode::Sequential;
                } else if (ok == "epochs")
                    c.output_epochs = ov.get<std::size_t>();
                else
                    raise(ErrorCode::InvalidArgument, "unknown output key '" + ok + "'");
            }
        } else
            raise(ErrorCode::InvalidArgument, "unknown config key '" + key + "'");
    }
    if (!(c.train_fraction > 0.0 && c.train_fraction < 1.0))
        raise(ErrorCode::InvalidArgument, "train_fraction must lie in (0, 1)");
    if (!(c.beta >= 0.0))
        raise(ErrorCode::InvalidArgument, "beta must be non-negative");
    return c;
}

} // namespace hsom::detail

namespace hsom::pipeline {

Config parse_config(const std::string& json_text, Config base)
{
    try {
        return detail::config_from_json(nlohmann::json::parse(json_text), std::move(base));
    } catch (const nlohmann::json::exception& e) {
        raise(ErrorCode::InvalidArgument, std::string("config: ") + e.what());
    }
}

std::string config_to_json(const Config& config) { return detail::to_json(config).dump(2) + "\n"; }

Config preset_config(const std::string& name)
{
    Config c;
    if (name == "synthetic") {
        c.train_fraction = 0.8;
        c.preprocess.mask = preprocess::AttentionMask::preset("all");
        c.preprocess.channels = preprocess::Channel::Position;
        c.layer1 = {15, 15, som::kDefaultActivationSigma, som::Schedule::standard(15, 15, 20)};
        c.layer2 = {12, 12, som::kDefaultActivationSigma, som::Schedule::standard(12, 12, 50)};
        return c;
    }
    if (name == "msr-exp1") {
        c.train_fraction = 0.8;
        c.preprocess.mask = preprocess::AttentionMask::preset("msr-exp1");
        c.preprocess.channels = preprocess::ChannelSet::parse("pos,vel,acc");
        return c;
    }
    if (name == "msr-exp2") {
        c.train_fraction = 0.75;
        c.preprocess.mask = preprocess::AttentionMask::preset("msr-exp2");
        c.preprocess.channels = preprocess::ChannelSet::parse("pos,vel");
        return c;
    }
    raise(ErrorCode::InvalidArgument, "unknown preset '" + name + "'");
}

} // namespace hsom::pipeline
