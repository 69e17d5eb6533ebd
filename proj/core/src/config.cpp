#include "sen/config.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace sen {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::string strip_comment(std::string_view line) {
    bool in_quote = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_quote = !in_quote;
        if (line[i] == '#' && !in_quote) return std::string(line.substr(0, i));
    }
    return std::string(line);
}

std::string unquote(const std::string& value, const std::string& where) {
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
        return value.substr(1, value.size() - 2);
    }
    if (!value.empty() && (value.front() == '"' || value.back() == '"')) {
        throw ConfigError(where + ": unbalanced quotes");
    }
    return value;
}

double parse_double(const std::string& value, const std::string& where) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(where + ": expected a number, got '" + value + "'");
    }
}

std::int64_t parse_int(const std::string& value, const std::string& where) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw ConfigError(where + ": expected an integer, got '" + value + "'");
    }
    return v;
}

bool parse_bool(const std::string& value, const std::string& where) {
    if (value == "true") return true;
    if (value == "false") return false;
    throw ConfigError(where + ": expected true or false, got '" + value + "'");
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"input.corpus",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             c.input_path = unquote(v, w);
         }},
        {"input.lexicon",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             c.lexicon_path = unquote(v, w);
         }},
        {"output.dir",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             c.out_dir = unquote(v, w);
         }},
        {"run.jobs",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             const auto jobs = parse_int(v, w);
             if (jobs < 0) throw ConfigError(w + ": jobs must be >= 0");
             c.jobs = static_cast<int>(jobs);
         }},
        {"run.seed",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             c.seed = static_cast<std::uint64_t>(parse_int(v, w));
         }},
        {"corpus.min_total",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             const auto n = parse_int(v, w);
             if (n <= 0) throw ConfigError(w + ": must be positive");
             c.engagement.min_total = static_cast<std::uint64_t>(n);
         }},
        {"corpus.min_span_months",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             const auto n = parse_int(v, w);
             if (n <= 0) throw ConfigError(w + ": must be positive");
             c.engagement.min_span_months = static_cast<unsigned>(n);
         }},
        {"corpus.regularity_rate",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             const double r = parse_double(v, w);
             if (r <= 0) throw ConfigError(w + ": must be positive");
             c.engagement.regularity_rate = r;
         }},
        {"corpus.max_low_month_fraction",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             const double f = parse_double(v, w);
             if (!(f > 0.0 && f <= 1.0)) throw ConfigError(w + ": must be in (0, 1]");
             c.engagement.max_low_month_fraction = f;
         }},
        {"sentiment.pos_threshold",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             const double t = parse_double(v, w);
             if (!(t > 0.0 && t < 1.0)) throw ConfigError(w + ": must be in (0, 1)");
             c.scorer.pos_threshold = t;
         }},
        {"sentiment.neg_threshold",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             const double t = parse_double(v, w);
             if (!(t > 0.0 && t < 1.0)) throw ConfigError(w + ": must be in (0, 1)");
             c.scorer.neg_threshold = t;
         }},
        {"sentiment.normalization_alpha",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             const double a = parse_double(v, w);
             if (a <= 0) throw ConfigError(w + ": must be positive");
             c.scorer.normalization_alpha = a;
         }},
        {"signing.threshold",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             const double t = parse_double(v, w);
             if (!(t >= 0.0 && t <= 1.0)) throw ConfigError(w + ": must be in [0, 1]");
             c.sign_threshold = t;
         }},
        {"egonet.bandwidth",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             if (unquote(v, w) == "auto") {
                 c.egonet.meanshift.bandwidth = 0.0;
                 return;
             }
             const double b = parse_double(v, w);
             if (b < 0) throw ConfigError(w + ": must be positive or \"auto\"");
             c.egonet.meanshift.bandwidth = b;
         }},
        {"egonet.quantile",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             const double q = parse_double(v, w);
             if (!(q > 0.0 && q < 1.0)) throw ConfigError(w + ": must be in (0, 1)");
             c.egonet.meanshift.quantile = q;
         }},
        {"egonet.max_iterations",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             const auto n = parse_int(v, w);
             if (n <= 0) throw ConfigError(w + ": must be positive");
             c.egonet.meanshift.max_iterations = static_cast<int>(n);
         }},
        {"egonet.convergence_tol",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             const double t = parse_double(v, w);
             if (t <= 0) throw ConfigError(w + ": must be positive");
             c.egonet.meanshift.convergence_tol = t;
         }},
        {"egonet.mode_merge_radius",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             const double r = parse_double(v, w);
             if (r < 0) throw ConfigError(w + ": must be >= 0 (0 = bandwidth)");
             c.egonet.meanshift.mode_merge_radius = r;
         }},
        {"egonet.log_space",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             c.egonet.log_space = parse_bool(v, w);
         }},
        {"egonet.active_min_freq",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             const double f = parse_double(v, w);
             if (f <= 0) throw ConfigError(w + ": must be positive");
             c.egonet.active_min_freq = f;
         }},
        {"egonet.duration_floor_days",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             const double d = parse_double(v, w);
             if (d <= 0) throw ConfigError(w + ": must be positive");
             c.egonet.duration_floor_days = d;
         }},
        {"report.averaging",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             const std::string mode = unquote(v, w);
             if (mode == "ego") c.report.averaging = ReportOptions::Averaging::PerEgo;
             else if (mode == "pooled") c.report.averaging = ReportOptions::Averaging::Pooled;
             else throw ConfigError(w + ": expected \"ego\" or \"pooled\"");
         }},
        {"report.ci_method",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             const std::string method = unquote(v, w);
             if (method == "t") c.report.ci_method = ReportOptions::CiMethod::StudentT;
             else if (method == "bootstrap")
                 c.report.ci_method = ReportOptions::CiMethod::Bootstrap;
             else throw ConfigError(w + ": expected \"t\" or \"bootstrap\"");
         }},
        {"report.ci_level",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             const double l = parse_double(v, w);
             if (!(l > 0.0 && l < 1.0)) throw ConfigError(w + ": must be in (0, 1)");
             c.report.ci_level = l;
         }},
        {"report.restrict_k",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             const auto k = parse_int(v, w);
             if (k <= 0) throw ConfigError(w + ": must be positive");
             c.report.restrict_k = static_cast<unsigned>(k);
         }},
        {"report.bootstrap_resamples",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             const auto n = parse_int(v, w);
             if (n <= 0) throw ConfigError(w + ": must be positive");
             c.report.bootstrap_resamples = static_cast<std::uint64_t>(n);
         }},
        {"report.bootstrap_seed",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             c.report.bootstrap_seed = static_cast<std::uint64_t>(parse_int(v, w));
         }},
        {"synth.egos",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             const auto n = parse_int(v, w);
             if (n <= 0) throw ConfigError(w + ": must be positive");
             c.synth_egos = static_cast<std::uint64_t>(n);
         }},
        {"synth.window_days",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             const double d = parse_double(v, w);
             if (d <= 0) throw ConfigError(w + ": must be positive");
             c.synth_window_days = d;
         }},
        {"synth.with_inactive",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             c.synth_with_inactive = parse_bool(v, w);
         }},
        {"synth.seed",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             c.seed = static_cast<std::uint64_t>(parse_int(v, w));
         }},
    };
    return table;
}

}  // namespace

void apply_config_text(RunConfig& config, const std::string& text,
                       const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    std::string section;
    std::uint64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(strip_comment(line));
        if (stripped.empty()) continue;
        const std::string where = origin + ":" + std::to_string(line_no);
        if (stripped.front() == '[') {
            if (stripped.back() != ']') throw ConfigError(where + ": unterminated section");
            section = trim(stripped.substr(1, stripped.size() - 2));
            if (section.empty()) throw ConfigError(where + ": empty section name");
            continue;
        }
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(where + ": expected key = value");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ConfigError(where + ": expected key = value");
        }
        if (section.empty()) throw ConfigError(where + ": key outside any [section]");
        const std::string full_key = section + "." + key;
        const auto it = setters().find(full_key);
        if (it == setters().end()) {
            throw ConfigError(where + ": unknown option '" + full_key + "'");
        }
        it->second(config, value, where + " (" + full_key + ")");
    }
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    RunConfig config;
    apply_config_text(config, buffer.str(), path);
    return config;
}

namespace {

std::uint64_t fnv1a(std::string_view data, std::uint64_t hash = 0xCBF29CE484222325ULL) {
    for (const char c : data) {
        hash ^= static_cast<unsigned char>(c);
        hash *= 0x100000001B3ULL;
    }
    return hash;
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string corpus_section(const RunConfig& c) {
    return "min_total=" + std::to_string(c.engagement.min_total) +
           ";min_span_months=" + std::to_string(c.engagement.min_span_months) +
           ";regularity_rate=" + num(c.engagement.regularity_rate) +
           ";max_low_month_fraction=" + num(c.engagement.max_low_month_fraction);
}

std::string sentiment_section(const RunConfig& c) {
    return "lexicon=" + c.lexicon_path + ";pos=" + num(c.scorer.pos_threshold) +
           ";neg=" + num(c.scorer.neg_threshold) +
           ";alpha=" + num(c.scorer.normalization_alpha);
}

std::string signing_section(const RunConfig& c) {
    return "threshold=" + num(c.sign_threshold);
}

std::string egonet_section(const RunConfig& c) {
    return "bandwidth=" + num(c.egonet.meanshift.bandwidth) +
           ";quantile=" + num(c.egonet.meanshift.quantile) +
           ";max_iterations=" + std::to_string(c.egonet.meanshift.max_iterations) +
           ";tol=" + num(c.egonet.meanshift.convergence_tol) +
           ";merge_radius=" + num(c.egonet.meanshift.mode_merge_radius) +
           ";log_space=" + std::to_string(c.egonet.log_space) +
           ";active_min_freq=" + num(c.egonet.active_min_freq) +
           ";duration_floor=" + num(c.egonet.duration_floor_days);
}

std::string report_section(const RunConfig& c) {
    return "averaging=" +
           std::to_string(static_cast<int>(c.report.averaging)) +
           ";ci_method=" + std::to_string(static_cast<int>(c.report.ci_method)) +
           ";ci_level=" + num(c.report.ci_level) +
           ";restrict_k=" + std::to_string(c.report.restrict_k) +
           ";resamples=" + std::to_string(c.report.bootstrap_resamples) +
           ";bootstrap_seed=" + std::to_string(c.report.bootstrap_seed);
}

}  // namespace

std::string stage_hash(const RunConfig& config, std::string_view artifact) {
    std::string material;
    if (artifact == "skips" || artifact == "filtered") {
        material = corpus_section(config);
    } else if (artifact == "labeled") {
        material = corpus_section(config) + "|" + sentiment_section(config);
    } else if (artifact == "edges") {
        material = corpus_section(config) + "|" + sentiment_section(config) + "|" +
                   signing_section(config);
    } else if (artifact == "egonets") {
        material = corpus_section(config) + "|" + egonet_section(config);
    } else if (artifact == "report") {
        material = corpus_section(config) + "|" + sentiment_section(config) + "|" +
                   signing_section(config) + "|" + egonet_section(config) + "|" +
                   report_section(config);
    } else {
        throw std::invalid_argument("unknown artifact: " + std::string(artifact));
    }
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a(material)));
    return buf;
}

}  // namespace sen
