#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "hsom/classifier.hpp"
#include "hsom/config.hpp"
#include "hsom/error.hpp"
#include "hsom/som.hpp"

namespace hsom::detail {

inline constexpr int kSomFormatVersion = 1;

nlohmann::json to_json(const som::Schedule& s);
som::Schedule schedule_from_json(const nlohmann::json& j, som::Schedule defaults);
nlohmann::json to_json(const som::Model& m);
som::Model som_from_json(const nlohmann::json& j);

nlohmann::json to_json(const classifier::OutputLayer& layer);
classifier::OutputLayer output_from_json(const nlohmann::json& j);

nlohmann::json to_json(const pipeline::Config& c);
pipeline::Config config_from_json(const nlohmann::json& j, pipeline::Config base = {});

// Throws CorruptFile for a wrong format tag, VersionMismatch for a wrong version.
void expect_format(const nlohmann::json& j, std::string_view format, int version);

// Parses text and applies f, mapping JSON-level failures to CorruptFile.
template <typename F>
auto guarded_parse(const std::string& text, F f)
{
    try {
        return f(nlohmann::json::parse(text));
    } catch (const nlohmann::json::exception& e) {
        raise(ErrorCode::CorruptFile, e.what());
    }
}

} // namespace hsom::detail
