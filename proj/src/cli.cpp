#include "nakabound/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <system_error>
#include <thread>

#include "nakabound/bounds.hpp"
#include "nakabound/errors.hpp"
#include "nakabound/sim.hpp"

namespace nakabound::cli {

namespace {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool read_double(std::string_view s, double& v) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return ec == std::errc{} && ptr == s.data() + s.size() && !s.empty();
}

double read_double_or_throw(std::string_view s, std::string_view what) {
    double v = 0.0;
    if (!read_double(s, v) || !std::isfinite(v))
        throw std::invalid_argument("bad " + std::string(what) + ": '" + std::string(s) + "'");
    return v;
}

int read_int_or_throw(std::string_view s) {
    s = trim(s);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
        throw std::invalid_argument("bad k: '" + std::string(s) + "'");
    return v;
}

}  // namespace

double parse_rate(std::string_view text) {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return read_double_or_throw(text, "rate");
    const double num = read_double_or_throw(text.substr(0, slash), "rate");
    const double den = read_double_or_throw(text.substr(slash + 1), "rate");
    if (den == 0.0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    return num / den;
}

std::vector<int> parse_k_values(std::string_view text) {
    const auto dots = text.find("..");
    if (dots == std::string_view::npos) return {read_int_or_throw(text)};
    const int from = read_int_or_throw(text.substr(0, dots));
    const int to = read_int_or_throw(text.substr(dots + 2));
    if (from > to) throw std::invalid_argument("empty k range '" + std::string(text) + "'");
    std::vector<int> out;
    for (int k = from; k <= to; ++k) out.push_back(k);
    return out;
}

std::vector<double> parse_alpha_values(std::string_view text) {
    const auto dots = text.find("..");
    if (dots == std::string_view::npos) return {parse_rate(text)};
    const auto colon = text.find(':', dots);
    if (colon == std::string_view::npos)
        throw std::invalid_argument("alpha range needs a step, e.g. 0.52..0.99:0.01");
    const double from = parse_rate(text.substr(0, dots));
    const double to = parse_rate(text.substr(dots + 2, colon - dots - 2));
    const double step = parse_rate(text.substr(colon + 1));
    if (!(step > 0.0)) throw std::invalid_argument("alpha step must be positive");
    if (from > to) throw std::invalid_argument("empty alpha range '" + std::string(text) + "'");
    std::vector<double> out;
    ProtocolParams base;
    for (const ProtocolParams& p : alpha_grid(base, from, to, step)) out.push_back(p.alpha);
    return out;
}

std::string format_exact(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string format_probability(double v, int precision) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, precision);
    return std::string(buf, res.ptr);
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

Cell infer_cell(std::string text, bool quoted) {
    if (quoted) return Cell::str(std::move(text));
    if (text.empty()) return Cell::null();
    if (text == "true" || text == "false") return Cell{Cell::Kind::Bool, std::move(text)};
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec == std::errc{} && ptr == text.data() + text.size()) return Cell::number(std::move(text));
    return Cell::str(std::move(text));
}

}  // namespace

std::string to_csv(const Table& t) {
    std::string out;
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
        if (c) out += ',';
        out += csv_field(t.columns[c]);
    }
    out += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            // A text cell that would otherwise read back as another kind is quoted.
            const Cell& cell = row[c];
            if (cell.kind == Cell::Kind::Text && infer_cell(cell.text, false).kind != Cell::Kind::Text)
                out += '"' + cell.text + '"';
            else
                out += csv_field(cell.text);
        }
        out += '\n';
    }
    return out;
}

Table parse_csv(std::string_view text) {
    Table t;
    std::vector<Cell> row;
    std::string field;
    bool quoted = false, in_quotes = false, header = true;
    auto end_field = [&] {
        row.push_back(infer_cell(std::move(field), quoted));
        field.clear();
        quoted = false;
    };
    auto end_row = [&] {
        end_field();
        if (header) {
            for (Cell& c : row) t.columns.push_back(std::move(c.text));
            header = false;
        } else if (row.size() != t.columns.size()) {
            throw std::invalid_argument("CSV row has " + std::to_string(row.size()) + " fields, header has " +
                                        std::to_string(t.columns.size()));
        } else {
            t.rows.push_back(std::move(row));
        }
        row.clear();
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        const bool next_is = i + 1 < text.size();
        if (in_quotes) {
            if (c != '"') {
                field += c;
            } else if (next_is && text[i + 1] == '"') {
                field += '"';
                ++i;
            } else {
                in_quotes = false;
            }
        } else if (c == '"') {
            in_quotes = quoted = true;
        } else if (c == ',') {
            end_field();
        } else if (c == '\n') {
            end_row();
        } else if (!(c == '\r' && next_is && text[i + 1] == '\n')) {
            field += c;
        }
    }
    if (in_quotes) throw std::invalid_argument("unterminated quote in CSV");
    if (!field.empty() || !row.empty() || quoted) end_row();
    return t;
}

std::string to_json(const Table& t) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t c = 0; c < t.columns.size(); ++c) {
            const Cell& cell = row[c];
            switch (cell.kind) {
                case Cell::Kind::Null:
                    obj[t.columns[c]] = nullptr;
                    break;
                case Cell::Kind::Number: {
                    const char* first = cell.text.data();
                    const char* last = first + cell.text.size();
                    std::int64_t i = 0;
                    if (const auto r = std::from_chars(first, last, i); r.ec == std::errc{} && r.ptr == last) {
                        obj[t.columns[c]] = i;
                        break;
                    }
                    double v = 0.0;
                    read_double(cell.text, v);
                    obj[t.columns[c]] = v;
                    break;
                }
                case Cell::Kind::Bool:
                    obj[t.columns[c]] = cell.text == "true";
                    break;
                case Cell::Kind::Text:
                    obj[t.columns[c]] = cell.text;
                    break;
            }
        }
        arr.push_back(std::move(obj));
    }
    return arr.dump(2) + "\n";
}

namespace {

struct CommonArgs {
    std::string lambda = "1/600";
    std::string delta = "10";
    std::string alpha = "0.9";
    std::string k = "6";
    std::string format = "csv";
    double eps = kDefaultEps;
    std::string lead_variant = "truncated";
    std::string pmf_variant = "printed";
    int precision = 6;
};

void add_common(CLI::App& app, CommonArgs& a) {
    app.add_option("--lambda", a.lambda, "Block rate per second, decimal or fraction")->capture_default_str();
    app.add_option("--delta", a.delta, "Network delay bound in seconds")->capture_default_str();
    app.add_option("--alpha", a.alpha, "Honest fraction, value or from..to:step")->capture_default_str();
    app.add_option("--k", a.k, "Confirmation depth, value or from..to")->capture_default_str();
    app.add_option("--eps", a.eps, "Truncation tolerance for infinite sums")
        ->capture_default_str()
        ->check(CLI::Range(1e-300, 0.5));
    app.add_option("--lead-variant", a.lead_variant, "Lower-bound lead chain")
        ->capture_default_str()
        ->check(CLI::IsMember({"truncated", "full"}));
    app.add_option("--pmf-variant", a.pmf_variant, "Confirmation PMF evaluation")
        ->capture_default_str()
        ->check(CLI::IsMember({"printed", "composition"}));
    app.add_option("--precision", a.precision, "Significant digits for probabilities")
        ->capture_default_str()
        ->check(CLI::Range(1, 17));
}

BoundOptions bound_options(const CommonArgs& a) {
    BoundOptions o;
    o.eps = a.eps;
    o.lower_lead = a.lead_variant == "full" ? LeadVariant::FullLower : LeadVariant::TruncatedLower;
    o.pmf_form = a.pmf_variant == "composition" ? PmfForm::Composition : PmfForm::Printed;
    return o;
}

std::vector<ProtocolParams> points(const CommonArgs& a) {
    ProtocolParams base;
    base.lambda = parse_rate(a.lambda);
    base.delta = parse_rate(a.delta);
    std::vector<ProtocolParams> out;
    for (double alpha : parse_alpha_values(a.alpha)) {
        for (int k : parse_k_values(a.k)) {
            ProtocolParams p = base;
            p.alpha = alpha;
            p.k = k;
            p.validate();
            out.push_back(p);
        }
    }
    return out;
}

const std::vector<std::string> kBoundColumns = {
    "lambda",          "delta",           "alpha",           "k",
    "lower",           "upper",           "lower_trunc_err", "upper_trunc_err",
    "ultimate_tolerance", "rigged_tolerance", "lower_walk_drift", "upper_walk_drift"};

std::vector<Cell> bound_cells(const SweepRow& r, int precision, std::ostream& err) {
    auto prob = [&](const std::optional<BoundResult>& b) {
        return b ? Cell::number(format_probability(b->value, precision)) : Cell::null();
    };
    auto trunc = [&](const std::optional<BoundResult>& b) {
        return b ? Cell::number(format_probability(b->truncation_error, 3)) : Cell::null();
    };
    if (!r.note.empty())
        err << "warning: alpha=" << format_exact(r.params.alpha) << " k=" << r.params.k << ": " << r.note << "\n";
    return {Cell::number(format_exact(r.params.lambda)),
            Cell::number(format_exact(r.params.delta)),
            Cell::number(format_exact(r.params.alpha)),
            Cell::number(std::to_string(r.params.k)),
            prob(r.lower),
            prob(r.upper),
            trunc(r.lower),
            trunc(r.upper),
            Cell::boolean(r.regime.ultimate_tolerance),
            Cell::boolean(r.regime.rigged_tolerance),
            Cell::boolean(r.regime.lower_walk_drift),
            Cell::boolean(r.regime.upper_walk_drift)};
}

void emit(const Table& t, const std::string& format, std::ostream& out) {
    out << (format == "json" ? to_json(t) : to_csv(t));
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path.string() + " for writing");
    f << content;
    f.close();
    if (!f) throw IoError("failed writing " + path.string());
}

int cmd_bound(const CommonArgs& a, std::ostream& out, std::ostream& err) {
    Table t;
    t.columns = kBoundColumns;
    for (const SweepRow& r : sweep(points(a), Which::Both, bound_options(a)))
        t.rows.push_back(bound_cells(r, a.precision, err));
    emit(t, a.format, out);
    return kOk;
}

struct SimArgs {
    std::uint64_t trials = 1'000'000;
    std::uint64_t seed = 1;
    std::string mode = "private-delta";
    std::uint64_t warmup = 10'000;
    std::uint64_t horizon = 1'000'000;
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    std::string histogram_out;
};

int cmd_simulate(const CommonArgs& a, const SimArgs& s, std::ostream& out, std::ostream& err) {
    Table t;
    t.columns = kBoundColumns;
    for (const char* c : {"mode", "trials", "seed", "warmup", "horizon", "discard_freq", "stderr", "truncated_trials"})
        t.columns.push_back(c);
    Table hist;
    hist.columns = {"alpha", "k", "value", "lead_count", "conf_count"};

    const BoundOptions opts = bound_options(a);
    for (const ProtocolParams& p : points(a)) {
        SimConfig cfg;
        cfg.params = p;
        cfg.trials = s.trials;
        cfg.seed = s.seed;
        cfg.mode = s.mode == "rigged" ? SimMode::RiggedModel : SimMode::PrivateAttackDelta;
        cfg.warmup_blocks = s.warmup;
        cfg.horizon = s.horizon;
        cfg.workers = s.workers;
        const SimReport rep = simulate_end_to_end(cfg, p.k);

        std::vector<Cell> row = bound_cells(sweep({p}, Which::Both, opts).front(), a.precision, err);
        row.push_back(Cell::str(std::string(to_string(cfg.mode))));
        row.push_back(Cell::number(std::to_string(cfg.trials)));
        row.push_back(Cell::number(std::to_string(cfg.seed)));
        row.push_back(Cell::number(std::to_string(cfg.warmup_blocks)));
        row.push_back(Cell::number(std::to_string(cfg.horizon)));
        row.push_back(Cell::number(format_probability(rep.discard_freq(), a.precision)));
        row.push_back(Cell::number(format_probability(rep.discard_stderr(), 3)));
        row.push_back(Cell::number(std::to_string(rep.truncated_trials())));
        t.rows.push_back(std::move(row));

        const std::size_t n = std::max(rep.lead_hist.counts.size(), rep.conf_count_hist.counts.size());
        for (std::size_t v = 0; v < n; ++v)
            hist.rows.push_back({Cell::number(format_exact(p.alpha)), Cell::number(std::to_string(p.k)),
                                 Cell::number(std::to_string(v)),
                                 Cell::number(std::to_string(rep.lead_hist.count(v))),
                                 Cell::number(std::to_string(rep.conf_count_hist.count(v)))});
    }
    if (!s.histogram_out.empty()) write_file(s.histogram_out, to_csv(hist));
    emit(t, a.format, out);
    return kOk;
}

int cmd_figures(const CommonArgs& a, const std::string& out_dir, const std::string& k_text, std::ostream& out,
                std::ostream& err) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create " + out_dir + ": " + ec.message());

    const BoundOptions opts = bound_options(a);
    const std::vector<int> ks = parse_k_values(k_text);
    auto k_sweep = [&](double lambda, double delta, double alpha) {
        ProtocolParams base{lambda, delta, alpha, 1};
        return k_range(base, ks.front(), ks.back());
    };
    auto table = [&](const std::vector<ProtocolParams>& pts, bool by_alpha) {
        Table t;
        t.columns = {by_alpha ? "alpha" : "k", "lower", "upper"};
        for (const SweepRow& r : sweep(pts, Which::Both, opts)) {
            std::vector<Cell> cells = bound_cells(r, a.precision, err);
            t.rows.push_back({by_alpha ? cells[2] : cells[3], cells[4], cells[5]});
        }
        return t;
    };

    ProtocolParams btc6;
    btc6.k = 6;
    const struct {
        const char* name;
        Table t;
    } figs[] = {
        {"fig3.csv", table(k_sweep(1.0 / 600.0, 10.0, 0.75), false)},
        {"fig4.csv", table(k_sweep(1.0 / 600.0, 10.0, 0.90), false)},
        {"fig5.csv", table(k_sweep(1.0 / 13.0, 2.0, 0.75), false)},
        {"fig6.csv", table(alpha_grid(btc6, 0.52, 0.99, 0.01), true)},
    };
    for (const auto& f : figs) {
        const auto path = std::filesystem::path(out_dir) / f.name;
        write_file(path, to_csv(f.t));
        out << path.string() << "\n";
    }
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Security-latency bounds for longest-chain proof-of-work protocols", "nakabound"};
    app.require_subcommand(1);

    CommonArgs bound_args;
    CLI::App* bound = app.add_subcommand("bound", "Lower and upper discard-probability bounds");
    add_common(*bound, bound_args);
    bound->add_option("--format", bound_args.format, "Output format")
        ->capture_default_str()
        ->check(CLI::IsMember({"csv", "json"}));

    CommonArgs sim_common;
    SimArgs sim_args;
    CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo estimate of the discard probability");
    add_common(*simulate, sim_common);
    simulate->add_option("--format", sim_common.format, "Output format")
        ->capture_default_str()
        ->check(CLI::IsMember({"csv", "json"}));
    simulate->add_option("--trials", sim_args.trials, "Independent trials")->capture_default_str();
    simulate->add_option("--seed", sim_args.seed, "Base seed")->capture_default_str();
    simulate->add_option("--mode", sim_args.mode, "Adversary model")
        ->capture_default_str()
        ->check(CLI::IsMember({"private-delta", "rigged"}));
    simulate->add_option("--warmup", sim_args.warmup, "Lead-chain steps before the target block")
        ->capture_default_str();
    simulate->add_option("--horizon", sim_args.horizon, "Step cap per post-confirmation race")
        ->capture_default_str();
    simulate->add_option("--workers", sim_args.workers, "Worker threads")->capture_default_str();
    simulate->add_option("--histogram-out", sim_args.histogram_out, "Write lead and count histograms to this CSV");

    CommonArgs fig_args;
    fig_args.lead_variant = "full";
    std::string out_dir;
    std::string fig_k = "1..20";
    CLI::App* figures = app.add_subcommand("figures", "Write the k- and alpha-sweep tables");
    add_common(*figures, fig_args);
    figures->remove_option(figures->get_option("--k"));
    figures->remove_option(figures->get_option("--alpha"));
    figures->add_option("--k", fig_k, "k range of the k sweeps")->capture_default_str();
    figures->add_option("--out-dir", out_dir, "Directory for fig3.csv .. fig6.csv")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kOk : kUsage;
    }

    try {
        if (bound->parsed()) return cmd_bound(bound_args, out, err);
        if (simulate->parsed()) {
            SimConfig probe;
            probe.trials = sim_args.trials;
            probe.warmup_blocks = sim_args.warmup;
            probe.horizon = sim_args.horizon;
            probe.workers = sim_args.workers;
            probe.validate();
            return cmd_simulate(sim_common, sim_args, out, err);
        }
        return cmd_figures(fig_args, out_dir, fig_k, out, err);
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kIo;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const RegimeViolation& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const HorizonTooSmall& e) {
        err << "error: " << e.what() << " (raise --horizon)\n";
        return kUsage;
    }
}

}  // namespace nakabound::cli
