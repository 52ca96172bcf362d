#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "meanper/cli.hpp"
#include "meanper/error.hpp"

namespace meanper::cli {

namespace {

// Key-level failure; the caller attaches the line number.
struct KeyProblem {
    std::string message;
};

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, std::string_view separators) {
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    while (pos < s.size()) {
        const auto next = s.find_first_of(separators, pos);
        const auto piece = trim(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
        if (!piece.empty()) parts.push_back(piece);
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return parts;
}

double to_double(std::string_view text) {
    double value = 0.0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size() || !std::isfinite(value)) {
        throw KeyProblem{"expected a finite real number, got '" + std::string(text) + "'"};
    }
    return value;
}

long long to_integer(std::string_view text) {
    long long value = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size()) {
        throw KeyProblem{"expected an integer, got '" + std::string(text) + "'"};
    }
    return value;
}

bool to_bool(std::string_view text) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw KeyProblem{"expected true or false, got '" + std::string(text) + "'"};
}

std::size_t to_count(std::string_view text, long long minimum) {
    const long long v = to_integer(text);
    if (v < minimum) throw KeyProblem{"must be at least " + std::to_string(minimum)};
    return static_cast<std::size_t>(v);
}

std::string one_of(std::string_view text, std::initializer_list<std::string_view> choices) {
    for (std::string_view c : choices) {
        if (text == c) return std::string(text);
    }
    std::string list;
    for (std::string_view c : choices) list += (list.empty() ? "" : " | ") + std::string(c);
    throw KeyProblem{"expected one of " + list + ", got '" + std::string(text) + "'"};
}

std::vector<ExponentialTerm> to_terms(std::string_view text) {
    std::vector<ExponentialTerm> terms;
    for (std::string_view item : split(text, ";")) {
        const auto fields = split(item, " \t,");
        if (fields.size() != 5) throw KeyProblem{"each term needs 're im m re_c im_c', got '" + std::string(item) + "'"};
        const long long m = to_integer(fields[2]);
        if (m < 0 || m > 16) throw KeyProblem{"monomial degree must lie in [0, 16]"};
        terms.push_back({{to_double(fields[0]), to_double(fields[1])}, static_cast<int>(m),
                         {to_double(fields[3]), to_double(fields[4])}});
    }
    if (terms.empty()) throw KeyProblem{"no terms given"};
    return terms;
}

void set_convolver(ConvolverBlock& b, std::string_view key, std::string_view value) {
    if (key == "kind") {
        b.kind = one_of(value, {"gegenbauer", "weighted", "tent"});
    } else if (key == "alpha") {
        b.alpha = to_double(value);
        if (!(b.alpha > -0.5)) throw KeyProblem{"constraint violated: alpha > -1/2"};
    } else if (key == "r") {
        b.r = to_double(value);
        if (!(b.r > 0.0)) throw KeyProblem{"constraint violated: r > 0"};
    } else if (key == "h_coeffs") {
        b.h_coeffs.clear();
        for (std::string_view f : split(value, " \t,")) b.h_coeffs.push_back(to_double(f));
        if (b.h_coeffs.empty()) throw KeyProblem{"no coefficients given"};
    } else {
        throw KeyProblem{"unknown key in [convolver]"};
    }
}

void set_function(FunctionBlock& b, std::string_view key, std::string_view value) {
    if (key == "variant") {
        b.variant = one_of(value, {"none", "exponential_sum", "sampled"});
    } else if (key == "terms") {
        b.terms = to_terms(value);
    } else if (key == "sample_file") {
        if (value.empty()) throw KeyProblem{"empty path"};
        b.sample_file = std::string(value);
    } else if (key == "half_width") {
        b.half_width = to_double(value);
        if (!(*b.half_width > 0.0)) throw KeyProblem{"constraint violated: half_width > 0"};
    } else if (key == "smoothness_k") {
        b.smoothness_k = static_cast<int>(to_count(value, 0));
    } else {
        throw KeyProblem{"unknown key in [function]"};
    }
}

void set_run(RunBlock& b, std::string_view key, std::string_view value) {
    if (key == "command") {
        b.command = one_of(value, {"spectrum", "coeffs", "extend", "verify", "bounds"});
    } else if (key == "suite") {
        b.suite = one_of(value, {"bessel", "tent", "weighted"});
    } else if (key == "R") {
        b.R = to_double(value);
        if (!(*b.R > 0.0)) throw KeyProblem{"constraint violated: R > 0"};
    } else if (key == "q") {
        b.q = static_cast<int>(to_count(value, 0));
    } else if (key == "k") {
        b.k = static_cast<int>(to_count(value, 0));
    } else if (key == "gamma") {
        b.gamma = to_double(value);
        if (!(*b.gamma > 0.0)) throw KeyProblem{"constraint violated: gamma > 0"};
    } else if (key == "cutoff") {
        b.cutoff = to_count(value, 1);
    } else if (key == "grid_size") {
        b.grid_size = to_count(value, 2);
    } else if (key == "quad_order") {
        b.quad_order = to_count(value, 8);
    } else if (key == "out_dir") {
        if (value.empty()) throw KeyProblem{"empty path"};
        b.out_dir = std::string(value);
    } else if (key == "threads") {
        b.threads = static_cast<unsigned>(to_count(value, 0));
    } else if (key == "lemma_n") {
        b.lemma_n = to_double(value);
        if (b.lemma_n < 0.0) throw KeyProblem{"constraint violated: lemma_n >= 0"};
    } else if (key == "k_max") {
        b.k_max = static_cast<int>(to_count(value, 0));
    } else if (key == "deterministic") {
        b.deterministic = to_bool(value);
        if (!b.deterministic) throw KeyProblem{"nondeterministic runs are not supported"};
    } else {
        throw KeyProblem{"unknown key in [run]"};
    }
}

void dispatch(RunConfig& cfg, std::string_view section, std::string_view key, std::string_view value) {
    if (section == "convolver") {
        set_convolver(cfg.convolver, key, value);
    } else if (section == "function") {
        set_function(cfg.function, key, value);
    } else if (section == "run") {
        set_run(cfg.run, key, value);
    } else {
        throw KeyProblem{"key outside a known section"};
    }
}

// Cross-key constraints, checked once the whole document is read.
void validate(const RunConfig& cfg) {
    const auto& c = cfg.convolver;
    if (c.kind != "weighted" && !c.h_coeffs.empty()) {
        throw Error(ErrorKind::Parse, "key 'h_coeffs': only valid with kind = weighted");
    }
    try {
        (void)make_convolver(c);
    } catch (const Error& e) {
        throw Error(ErrorKind::Parse, std::string("[convolver]: ") + e.what());
    }
    const auto& f = cfg.function;
    if (f.variant == "exponential_sum") {
        if (f.terms.empty()) throw Error(ErrorKind::Parse, "key 'terms': required for variant = exponential_sum");
        if (!f.half_width) throw Error(ErrorKind::Parse, "key 'half_width': required for variant = exponential_sum");
    } else if (f.variant == "sampled") {
        if (f.sample_file.empty()) throw Error(ErrorKind::Parse, "key 'sample_file': required for variant = sampled");
    }
}

}  // namespace

RunConfig parse_config(std::string_view text, std::string base_dir) {
    RunConfig cfg;
    cfg.base_dir = std::move(base_dir);
    std::string section;
    std::size_t line_no = 0;
    std::vector<std::string> seen;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto end = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = "line " + std::to_string(line_no) + ": ";
        if (line.front() == '[') {
            if (line.back() != ']') throw Error(ErrorKind::Parse, where + "malformed section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (section != "convolver" && section != "function" && section != "run") {
                throw Error(ErrorKind::Parse, where + "unknown section [" + section + "]");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw Error(ErrorKind::Parse, where + "expected 'key = value'");
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty()) throw Error(ErrorKind::Parse, where + "missing key");
        const std::string full = section + "." + std::string(key);
        if (std::find(seen.begin(), seen.end(), full) != seen.end()) {
            throw Error(ErrorKind::Parse, where + "key '" + std::string(key) + "': duplicate");
        }
        seen.push_back(full);
        try {
            dispatch(cfg, section, key, value);
        } catch (const KeyProblem& p) {
            throw Error(ErrorKind::Parse, where + "key '" + std::string(key) + "': " + p.message);
        }
    }
    validate(cfg);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::InvalidArgument, "load_config: cannot open '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), std::filesystem::path(path).parent_path().string());
}

void set_key(RunConfig& cfg, std::string_view section, std::string_view key, std::string_view value) {
    try {
        dispatch(cfg, section, key, trim(value));
    } catch (const KeyProblem& p) {
        throw Error(ErrorKind::Parse, "key '" + std::string(key) + "': " + p.message);
    }
}

void apply_environment(RunConfig& cfg) {
    if (const char* out = std::getenv("MEANPER_OUT"); out != nullptr && *out != '\0') cfg.run.out_dir = out;
}

Convolver make_convolver(const ConvolverBlock& block) {
    if (block.kind == "tent") return Convolver::tent(block.r);
    if (block.kind == "weighted") {
        return Convolver::weighted(block.alpha, block.r, block.h_coeffs.empty() ? std::vector<double>{1.0} : block.h_coeffs);
    }
    return Convolver::gegenbauer(block.alpha, block.r);
}

FunctionSpec make_function(const RunConfig& cfg) {
    const FunctionBlock& f = cfg.function;
    if (f.variant == "exponential_sum") return FunctionSpec::exponential_sum(f.terms, *f.half_width);
    require(f.variant == "sampled", ErrorKind::InvalidArgument, "make_function: the [function] block is empty");

    std::filesystem::path path(f.sample_file);
    if (path.is_relative() && !cfg.base_dir.empty()) path = std::filesystem::path(cfg.base_dir) / path;
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorKind::InvalidArgument, "make_function: cannot open '" + path.string() + "'");
    std::vector<double> grid;
    std::vector<cplx> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = trim(line);
        if (view.empty() || view.front() == '#') continue;
        const auto fields = split(view, ",");
        try {
            if (fields.size() != 2 && fields.size() != 3) throw KeyProblem{"expected 't,value' or 't,re,im'"};
            grid.push_back(to_double(fields[0]));
            values.emplace_back(to_double(fields[1]), fields.size() == 3 ? to_double(fields[2]) : 0.0);
        } catch (const KeyProblem& p) {
            throw Error(ErrorKind::Parse, path.string() + " line " + std::to_string(line_no) + ": " + p.message);
        }
    }
    auto spec = FunctionSpec::sampled(std::move(grid), std::move(values), f.smoothness_k.value_or(0));
    if (f.half_width) {
        require(std::abs(*f.half_width - spec.half_width()) <= 1e-12 * spec.half_width(), ErrorKind::InvalidArgument,
                "make_function: half_width disagrees with the sample grid");
    }
    return spec;
}

}  // namespace meanper::cli
