#include "hsom/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "hsom/error.hpp"
#include "hsom/random.hpp"

namespace hsom::dataset {

namespace fs = std::filesystem;

JointOrder::JointOrder() : rows_(all_joints()) {}

JointOrder::JointOrder(std::array<JointId, kJointCount> rows) : rows_(rows)
{
    std::array<bool, kJointCount> seen{};
    for (auto j : rows_) {
        const auto i = index(j);
        if (i >= kJointCount || seen[i])
            raise(ErrorCode::InvalidSpec, "joint order is not a permutation of the 20 joints");
        seen[i] = true;
    }
}

JointOrder JointOrder::from_names(std::span<const std::string> names)
{
    if (names.size() != kJointCount)
        raise(ErrorCode::InvalidSpec, "joint order needs exactly 20 names, got " + std::to_string(names.size()));
    std::array<JointId, kJointCount> rows{};
    for (std::size_t k = 0; k < kJointCount; ++k) {
        const auto j = joint_from_name(names[k]);
        if (!j)
            raise(ErrorCode::InvalidSpec, "unknown joint name '" + names[k] + "'");
        rows[k] = *j;
    }
    return JointOrder(rows);
}

bool JointOrder::is_identity() const noexcept { return rows_ == all_joints(); }

namespace {

std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> tokens(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos < line.size()) {
        const auto b = line.find_first_not_of(" \t\r", pos);
        if (b == std::string_view::npos)
            break;
        auto e = line.find_first_of(" \t\r", b);
        if (e == std::string_view::npos)
            e = line.size();
        out.push_back(line.substr(b, e - b));
        pos = e;
    }
    return out;
}

bool parse_double(std::string_view tok, double& out)
{
    const auto* first = tok.data();
    const auto* last = tok.data() + tok.size();
    if (first != last && *first == '+')
        ++first;
    const auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

bool parse_count(std::string_view tok, long long& out)
{
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    return ec == std::errc{} && ptr == tok.data() + tok.size() && out >= 0;
}

void append_number(std::string& out, double v)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, ptr);
}

} // namespace

ActionSample parse_skeleton_file(std::string_view text, ClassId label, SampleMeta meta,
                                 const JointOrder& order)
{
    std::vector<std::string_view> lines;
    for (std::size_t pos = 0; pos <= text.size();) {
        auto e = text.find('\n', pos);
        if (e == std::string_view::npos)
            e = text.size();
        const auto line = trim(text.substr(pos, e - pos));
        if (!line.empty())
            lines.push_back(line);
        pos = e + 1;
    }
    if (lines.empty())
        raise(ErrorCode::EmptyFile, "no skeleton rows");

    std::size_t first_row = 0;
    std::optional<std::size_t> header_frames;
    std::optional<std::size_t> header_columns;
    {
        const auto head = tokens(lines.front());
        long long a = 0;
        long long b = 0;
        long long c = 0;
        if ((head.size() == 2 || head.size() == 3) && parse_count(head[0], a) && parse_count(head[1], b)
            && (head.size() == 2 || parse_count(head[2], c))) {
            if (b != static_cast<long long>(kJointCount))
                raise(ErrorCode::MalformedFile, "header declares " + std::to_string(b) + " joints, expected 20");
            if (head.size() == 3 && c != 3 && c != 4)
                raise(ErrorCode::MalformedFile, "header declares " + std::to_string(c) + " columns");
            header_frames = static_cast<std::size_t>(a);
            if (head.size() == 3)
                header_columns = static_cast<std::size_t>(c);
            first_row = 1;
        }
    }

    const std::size_t row_count = lines.size() - first_row;
    if (row_count == 0)
        raise(ErrorCode::EmptyFile, "header without skeleton rows");
    if (header_frames && *header_frames * kJointCount != row_count)
        raise(ErrorCode::MalformedFile, "header declares " + std::to_string(*header_frames) + " frames but file has "
                                            + std::to_string(row_count) + " joint rows");
    if (row_count % kJointCount != 0)
        raise(ErrorCode::MalformedFile, std::to_string(row_count) + " joint rows is not a whole number of 20-joint frames");

    ActionSample sample;
    sample.label = label;
    sample.subject = meta.subject;
    sample.event = meta.event;
    sample.frames.resize(row_count / kJointCount);

    for (std::size_t r = 0; r < row_count; ++r) {
        const auto toks = tokens(lines[first_row + r]);
        if (toks.size() != 3 && toks.size() != 4)
            raise(ErrorCode::MalformedFile, "row " + std::to_string(r + 1) + " has " + std::to_string(toks.size())
                                                + " columns");
        if (header_columns && toks.size() != *header_columns)
            raise(ErrorCode::MalformedFile, "row " + std::to_string(r + 1) + " disagrees with the header column count");
        double v[4] = {0.0, 0.0, 0.0, 1.0};
        for (std::size_t k = 0; k < toks.size(); ++k) {
            if (!parse_double(toks[k], v[k]) || !std::isfinite(v[k]))
                raise(ErrorCode::MalformedFile, "row " + std::to_string(r + 1) + ": bad number '"
                                                    + std::string(toks[k]) + "'");
        }
        auto& frame = sample.frames[r / kJointCount];
        const auto joint = index(order.joint_at_row(r % kJointCount));
        frame.joints[joint] = {v[0], v[1], v[2]};
        frame.confidence[joint] = v[3];
    }
    return sample;
}

std::string serialize_sample(const ActionSample& sample, const JointOrder& order)
{
    std::string out;
    out.reserve(sample.frames.size() * kJointCount * 48 + 16);
    out += std::to_string(sample.frames.size()) + " 20 4\n";
    for (const auto& frame : sample.frames) {
        for (std::size_t r = 0; r < kJointCount; ++r) {
            const auto joint = index(order.joint_at_row(r));
            const auto& p = frame.joints[joint];
            append_number(out, p.x);
            out += ' ';
            append_number(out, p.y);
            out += ' ';
            append_number(out, p.z);
            out += ' ';
            append_number(out, frame.confidence[joint]);
            out += '\n';
        }
    }
    return out;
}

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        raise(ErrorCode::IoError, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, std::string_view content)
{
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        raise(ErrorCode::IoError, "cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out)
        raise(ErrorCode::IoError, "short write to " + path.string());
}

namespace {

bool parse_subject_event(const std::string& stem, SampleMeta& meta)
{
    static const std::regex re(R"((\d+)_(\d+))");
    std::smatch m;
    if (!std::regex_match(stem, m, re))
        return false;
    meta.subject = std::stoi(m[1].str());
    meta.event = std::stoi(m[2].str());
    return true;
}

} // namespace

Corpus load_corpus(const fs::path& root, const JointOrder& order)
{
    if (!fs::is_directory(root))
        raise(ErrorCode::IoError, root.string() + " is not a directory");
    std::vector<fs::path> class_dirs;
    for (const auto& entry : fs::directory_iterator(root))
        if (entry.is_directory())
            class_dirs.push_back(entry.path());
    std::sort(class_dirs.begin(), class_dirs.end());

    Corpus corpus;
    corpus.provenance = "dir:" + root.string();
    for (const auto& dir : class_dirs) {
        const ClassId label = corpus.class_names.size();
        corpus.class_names.push_back(dir.filename().string());

        std::vector<std::pair<SampleMeta, fs::path>> files;
        for (const auto& entry : fs::directory_iterator(dir)) {
            if (!entry.is_regular_file() || entry.path().extension() != ".txt")
                continue;
            SampleMeta meta;
            if (!parse_subject_event(entry.path().stem().string(), meta))
                raise(ErrorCode::MalformedFile, entry.path().string() + " is not named <subject>_<event>.txt");
            files.emplace_back(meta, entry.path());
        }
        std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) {
            return std::tie(a.first.subject, a.first.event) < std::tie(b.first.subject, b.first.event);
        });
        for (const auto& [meta, path] : files)
            corpus.samples.push_back(parse_skeleton_file(read_file(path), label, meta, order));
    }
    if (corpus.samples.empty())
        raise(ErrorCode::EmptyCorpus, "no samples under " + root.string());
    return corpus;
}

void write_corpus(const Corpus& corpus, const fs::path& root, const JointOrder& order)
{
    corpus.validate();
    for (const auto& s : corpus.samples) {
        const auto path = root / corpus.class_names[s.label]
                          / (std::to_string(s.subject) + "_" + std::to_string(s.event) + ".txt");
        write_file(path, serialize_sample(s, order));
    }
}

const std::array<std::string_view, 20>& msr_action_names() noexcept
{
    static constexpr std::array<std::string_view, 20> names = {
        "HighArmWave", "HorizontalArmWave", "Hammer",     "HandCatch",   "ForwardPunch",
        "HighThrow",   "DrawX",             "DrawTick",   "DrawCircle",  "HandClap",
        "TwoHandWave", "SideBoxing",        "Bend",       "ForwardKick", "SideKick",
        "Jogging",     "TennisSwing",       "TennisServe", "GolfSwing",  "PickUpThrow",
    };
    return names;
}

std::vector<int> msr_experiment_actions(int experiment)
{
    switch (experiment) {
    case 1: return {1, 2, 3, 4, 5, 6, 7, 8, 9, 17};
    case 2: return {10, 11, 12, 13, 14, 15, 16, 18, 19, 20};
    default: raise(ErrorCode::InvalidArgument, "experiment must be 1 or 2");
    }
}

Corpus load_msr_directory(const fs::path& root, std::span<const int> action_ids, const JointOrder& order)
{
    if (!fs::is_directory(root))
        raise(ErrorCode::IoError, root.string() + " is not a directory");
    std::map<int, ClassId> label_of;
    Corpus corpus;
    corpus.provenance = "msr:" + root.string();
    for (int a : action_ids) {
        if (a < 1 || a > 20)
            raise(ErrorCode::InvalidArgument, "MSR action id out of range: " + std::to_string(a));
        label_of[a] = corpus.class_names.size();
        corpus.class_names.emplace_back(msr_action_names()[static_cast<std::size_t>(a - 1)]);
    }

    static const std::regex re(R"(a(\d+)_s(\d+)_e(\d+)_skeleton.*\.txt)");
    std::vector<std::tuple<int, int, int, fs::path>> files;
    for (const auto& entry : fs::directory_iterator(root)) {
        if (!entry.is_regular_file())
            continue;
        const auto name = entry.path().filename().string();
        std::smatch m;
        if (!std::regex_match(name, m, re))
            continue;
        const int a = std::stoi(m[1].str());
        if (label_of.count(a))
            files.emplace_back(a, std::stoi(m[2].str()), std::stoi(m[3].str()), entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& [a, s, e, path] : files)
        corpus.samples.push_back(parse_skeleton_file(read_file(path), label_of[a], {s, e}, order));
    if (corpus.samples.empty())
        raise(ErrorCode::EmptyCorpus, "no MSR skeleton files under " + root.string());
    return corpus;
}

std::pair<Corpus, Corpus> split_dataset(const Corpus& corpus, double train_fraction, std::uint64_t seed)
{
    if (corpus.samples.empty())
        raise(ErrorCode::EmptyCorpus, "cannot split an empty corpus");
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        raise(ErrorCode::InvalidArgument, "train fraction must lie in (0, 1)");
    corpus.validate();

    std::vector<std::vector<std::size_t>> by_class(corpus.class_count());
    for (std::size_t i = 0; i < corpus.samples.size(); ++i)
        by_class[corpus.samples[i].label].push_back(i);

    Rng rng(seed);
    std::vector<bool> in_train(corpus.samples.size(), false);
    for (std::size_t k = 0; k < by_class.size(); ++k) {
        auto& idx = by_class[k];
        if (idx.empty())
            continue;
        const auto n = idx.size();
        const auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n)));
        if (n_train == 0 || n_train == n)
            raise(ErrorCode::DegenerateSplit, "class '" + corpus.class_names[k] + "' with " + std::to_string(n)
                                                  + " samples would leave an empty train or test part");
        rng.shuffle(std::span<std::size_t>(idx));
        for (std::size_t t = 0; t < n_train; ++t)
            in_train[idx[t]] = true;
    }

    Corpus train;
    Corpus test;
    train.class_names = test.class_names = corpus.class_names;
    train.provenance = corpus.provenance + "#train";
    test.provenance = corpus.provenance + "#test";
    for (std::size_t i = 0; i < corpus.samples.size(); ++i)
        (in_train[i] ? train : test).samples.push_back(corpus.samples[i]);
    return {std::move(train), std::move(test)};
}

std::string manifest_text(const Corpus& corpus)
{
    std::string out;
    for (std::size_t i = 0; i < corpus.samples.size(); ++i)
        out += corpus.sample_id(i) + "\n";
    return out;
}

std::vector<std::string> parse_manifest(std::string_view text)
{
    std::vector<std::string> ids;
    for (std::size_t pos = 0; pos <= text.size();) {
        auto e = text.find('\n', pos);
        if (e == std::string_view::npos)
            e = text.size();
        const auto line = trim(text.substr(pos, e - pos));
        if (!line.empty() && line.front() != '#')
            ids.emplace_back(line);
        pos = e + 1;
    }
    return ids;
}

Corpus select(const Corpus& corpus, std::span<const std::string> ids)
{
    std::unordered_map<std::string, std::size_t> index_of;
    for (std::size_t i = 0; i < corpus.samples.size(); ++i)
        index_of.emplace(corpus.sample_id(i), i);
    Corpus out;
    out.class_names = corpus.class_names;
    out.provenance = corpus.provenance + "#manifest";
    for (const auto& id : ids) {
        const auto it = index_of.find(id);
        if (it == index_of.end())
            raise(ErrorCode::InvalidArgument, "manifest id '" + id + "' not found in corpus");
        out.samples.push_back(corpus.samples[it->second]);
    }
    return out;
}

} // namespace hsom::dataset
