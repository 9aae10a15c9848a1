#include "dealdesk/cli.hpp"

#include <openssl/evp.h>
#include <unistd.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include "dealdesk/comps.hpp"
#include "dealdesk/deals.hpp"
#include "dealdesk/economics.hpp"
#include "dealdesk/error.hpp"
#include "dealdesk/kv_config.hpp"
#include "dealdesk/report.hpp"
#include "dealdesk/waves.hpp"

#ifndef DEALDESK_VERSION
#define DEALDESK_VERSION "0.0.0"
#endif

namespace dealdesk::cli {

namespace {

namespace fs = std::filesystem;
using report::Json;

struct Input {
    std::string role;
    std::string path;
    std::string bytes;
    std::string sha256;
};

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw Error(ErrorKind::InvalidArgument, "sha256 digest failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

Input read_input(const std::string& role, const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorKind::ConfigInvalid, role + " file '" + path + "' cannot be opened");
    std::ostringstream ss;
    ss << f.rdbuf();
    Input in{role, path, ss.str(), {}};
    in.sha256 = sha256_hex(in.bytes);
    return in;
}

/// Writes to a sibling temporary file and renames it over `path`.
void write_atomically(const std::string& path, const std::string& content) {
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw Error(ErrorKind::ConfigInvalid, "cannot write '" + path + "'");
        f << content;
        f.flush();
        if (!f) {
            f.close();
            fs::remove(tmp);
            throw Error(ErrorKind::InvalidArgument, "write to '" + path + "' failed");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw Error(ErrorKind::InvalidArgument, "cannot rename onto '" + path + "': " + ec.message());
    }
}

Json error_json(std::string_view command, ErrorKind kind, const std::string& message) {
    return Json{{"tool", "dealdesk"},
                {"version", DEALDESK_VERSION},
                {"command", command},
                {"status", "error"},
                {"error", Json{{"kind", to_string(kind)}, {"message", message}}}};
}

std::optional<std::string> same_file(const std::string& a, const std::string& b) {
    std::error_code ec1, ec2;
    const auto ca = fs::weakly_canonical(a, ec1), cb = fs::weakly_canonical(b, ec2);
    if (!ec1 && !ec2 && ca == cb) return ca.string();
    return std::nullopt;
}

/// What a command hands back for rendering.
struct Outcome {
    Json result;
    std::string text;
    Json parameters = Json::object();
    std::optional<std::uint64_t> seed;
};

/// Everything a subcommand needs after CLI parsing.
struct Command {
    CLI::App* app = nullptr;
    /// Reads and validates inputs; throws Error(ConfigInvalid) on bad configuration.
    std::function<void()> prepare;
    std::function<Outcome()> execute;
};

struct Session {
    std::string format = "json";
    std::string output;
    unsigned threads_flag = 0;
    unsigned threads = 1;
    std::vector<Input> inputs;

    const Input& load(const std::string& role, const std::string& path) {
        inputs.push_back(read_input(role, path));
        return inputs.back();
    }

    void emit_side(const std::string& path, const std::string& content);
};

void Session::emit_side(const std::string& path, const std::string& content) {
    if (path.empty()) return;
    for (const auto& in : inputs)
        if (auto p = same_file(path, in.path)) throw Error(ErrorKind::ConfigInvalid, "refusing to overwrite input " + *p);
    write_atomically(path, content);
}

unsigned resolve_threads(unsigned flag) {
    if (flag > 0) return flag;
    if (const char* env = std::getenv("DEALDESK_THREADS"); env && *env) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (*end != '\0' || v < 1 || v > 1024)
            throw Error(ErrorKind::ConfigInvalid, std::string("DEALDESK_THREADS must be an integer in 1..1024, got '") +
                                                      env + "'");
        return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Rethrows module errors raised while checking parameters as ConfigInvalid.
template <typename F>
void as_config_check(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        throw Error(ErrorKind::ConfigInvalid, e.detail());
    }
}

deals::DealFilter country_filter(const std::string& country) {
    if (country.empty()) return {};
    return [country](const deals::DealRecord& d) { return d.target_country == country || d.bidder_country == country; };
}

std::string series_csv(const waves::CountSeries& s) {
    std::ostringstream os;
    waves::write_count_series(os, s);
    return os.str();
}

// --- subcommands ---------------------------------------------------------------

Command value_command(CLI::App& app, Session& session) {
    struct Opts {
        std::vector<std::string> comps;
        std::string target_path, ranges_path;
        comps::CompSet set;
        comps::TargetProfile target;
        comps::RangeFile ranges;
    };
    auto o = std::make_shared<Opts>();
    auto* sub = app.add_subcommand("value", "Comparable-multiples valuation summary");
    sub->add_option("--comps", o->comps, "Comparable trading / transaction CSV (repeatable)")->check(CLI::ExistingFile);
    sub->add_option("--target", o->target_path, "One-row target metrics CSV")->required()->check(CLI::ExistingFile);
    sub->add_option("--ranges", o->ranges_path, "Multiple ranges (key = \"low..high\")")->required()->check(CLI::ExistingFile);

    Command c;
    c.app = sub;
    c.prepare = [&session, o] {
        for (const auto& path : o->comps) {
            std::istringstream in(session.load("comps", path).bytes);
            auto part = comps::load_comps(in);
            for (auto& m : part.members) o->set.members.push_back(std::move(m));
        }
        std::istringstream tin(session.load("target", o->target_path).bytes);
        o->target = comps::load_target(tin);
        std::istringstream rin(session.load("ranges", o->ranges_path).bytes);
        as_config_check([&] { o->ranges = comps::parse_ranges(KeyValueConfig::parse(rin)); });
    };
    c.execute = [o] {
        const auto summary = comps::value_target(o->target, o->ranges.rows, o->ranges.weights);
        Outcome out;
        Json comparables = Json::object();
        std::ostringstream text;
        for (auto kind : {comps::CompKind::Trading, comps::CompKind::Transaction}) {
            comps::CompSet part;
            for (const auto& m : o->set.members)
                if (m.kind == kind) part.members.push_back(m);
            if (part.members.empty()) continue;
            Json metrics = Json::object();
            for (const auto& name : part.metric_names()) metrics[name] = report::to_json(comps::aggregate(part, name));
            const char* key = kind == comps::CompKind::Trading ? "trading" : "transaction";
            comparables[key] = Json{{"members", part.members.size()}, {"metrics", metrics}};
            report::write_comparables_text(text, part, key);
            text << '\n';
        }
        out.result = Json{{"target", o->target.name}, {"comparables", comparables}, {"valuation", report::to_json(summary)}};
        report::write_valuation_text(text, summary);
        out.text = text.str();
        out.parameters = Json{{"method_weights", Json{{"trading", o->ranges.weights.trading},
                                                      {"transaction", o->ranges.weights.transaction}}},
                              {"range_rows", o->ranges.rows.size()}};
        return out;
    };
    return c;
}

Command event_study_command(CLI::App& app, Session& session) {
    struct Opts {
        std::string returns, event_date;
        long event_index = -1;
        long estimation_length = 60;
        long half_width = 1;
        economics::ReturnSeries series;
        economics::EventWindows windows;
    };
    auto o = std::make_shared<Opts>();
    auto* sub = app.add_subcommand("event-study", "Market-model fit and abnormal returns around an event");
    sub->add_option("--returns", o->returns, "CSV with date, firm_return, market_return")->required()->check(CLI::ExistingFile);
    auto* idx = sub->add_option("--event-index", o->event_index, "Row index of the event (0-based)")->check(CLI::NonNegativeNumber);
    auto* date = sub->add_option("--event-date", o->event_date, "ISO date of the event");
    idx->excludes(date);
    sub->add_option("--estimation-length", o->estimation_length, "Estimation window length")
        ->capture_default_str()
        ->check(CLI::Range(3L, 100000L));
    sub->add_option("--half-width", o->half_width, "Event window half-width")->capture_default_str()->check(CLI::NonNegativeNumber);

    Command c;
    c.app = sub;
    c.prepare = [&session, o, idx, date] {
        if (idx->count() == 0 && date->count() == 0)
            throw Error(ErrorKind::ConfigInvalid, "one of --event-index or --event-date is required");
        if (date->count() && !parse_iso_date(o->event_date))
            throw Error(ErrorKind::ConfigInvalid, "--event-date must be YYYY-MM-DD");
        std::istringstream in(session.load("returns", o->returns).bytes);
        o->series = economics::load_returns(in);
    };
    c.execute = [o, date] {
        Eigen::Index event = o->event_index;
        if (date->count()) {
            const auto d = *parse_iso_date(o->event_date);
            const auto it = std::find(o->series.dates.begin(), o->series.dates.end(), d);
            if (it == o->series.dates.end())
                throw Error(ErrorKind::ConfigInvalid, "event date " + o->event_date + " is not in the return series");
            event = it - o->series.dates.begin();
        }
        o->windows = economics::default_windows(event, o->estimation_length, o->half_width);
        const auto study = economics::run_event_study(o->series, o->windows);
        Outcome out;
        out.result = report::to_json(study, o->series);
        std::ostringstream text;
        report::write_event_study_text(text, study);
        out.text = text.str();
        out.parameters = Json{{"event_index", event},
                              {"estimation_length", o->estimation_length},
                              {"half_width", o->half_width}};
        return out;
    };
    return c;
}

Command regress_command(CLI::App& app, Session& session) {
    struct Opts {
        std::string data;
        economics::TakeoverRegressionSpec spec;
    };
    auto o = std::make_shared<Opts>();
    auto* sub = app.add_subcommand("regress", "Takeover-frequency regression");
    sub->add_option("--data", o->data, "CSV with '# role = columns' header lines")->required()->check(CLI::ExistingFile);
    Command c;
    c.app = sub;
    c.prepare = [&session, o] {
        std::istringstream in(session.load("data", o->data).bytes);
        o->spec = economics::load_takeover_spec(in);
    };
    c.execute = [o] {
        const auto fit = economics::fit_takeover_regression(o->spec);
        Outcome out;
        out.result = report::to_json(fit);
        std::ostringstream text;
        report::write_regression_text(text, fit);
        out.text = text.str();
        out.parameters = Json{{"intercept", o->spec.include_intercept}};
        return out;
    };
    return c;
}

struct WaveShape {
    long window = 3;
    long lags = 5;
    long degree = 3;
    std::string plot_data;
};

void add_shape_options(CLI::App* sub, WaveShape& s) {
    sub->add_option("--window", s.window, "Moving-average window k")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--lags", s.lags, "Autocorrelation lags L")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--degree", s.degree, "Polynomial degree d")
        ->capture_default_str()
        ->check(CLI::Range(0L, static_cast<long>(waves::kMaxPolynomialDegree)));
    sub->add_option("--plot-data", s.plot_data, "Write period,raw,smoothed,poly_fit CSV here");
}

Json shape_json(const WaveShape& s) { return Json{{"window", s.window}, {"lags", s.lags}, {"degree", s.degree}}; }

std::string plot_csv(const waves::CountSeries& raw, const waves::WaveDiagnostics& d) {
    std::ostringstream os;
    waves::write_plot_data(os, raw, d);
    return os.str();
}

Command waves_command(CLI::App& app, Session& session) {
    struct Opts {
        std::string series_path, deals_path, bucketing = "month", sector, country;
        WaveShape shape;
        waves::CountSeries series;
        std::optional<deals::ParseResult> parsed;
        std::optional<deals::DealSeries> dseries;
    };
    auto o = std::make_shared<Opts>();
    auto* sub = app.add_subcommand("waves", "Moving-average, autocorrelation, periodogram and polynomial diagnostics");
    auto* s = sub->add_option("--series", o->series_path, "Count series CSV (period,value)")->check(CLI::ExistingFile);
    auto* d = sub->add_option("--deals", o->deals_path, "Deal table CSV, aggregated to counts")->check(CLI::ExistingFile);
    s->excludes(d);
    sub->add_option("--bucketing", o->bucketing, "month, quarter or year")
        ->capture_default_str()
        ->check(CLI::IsMember({"month", "quarter", "year"}));
    sub->add_option("--sector", o->sector, "Sector label stamped on deals");
    sub->add_option("--country", o->country, "Keep deals whose target or bidder country matches");
    add_shape_options(sub, o->shape);

    Command c;
    c.app = sub;
    c.prepare = [&session, o, s, d] {
        if (s->count() + d->count() != 1) throw Error(ErrorKind::ConfigInvalid, "exactly one of --series or --deals is required");
        if (s->count()) {
            std::istringstream in(session.load("series", o->series_path).bytes);
            o->series = waves::load_count_series(in);
        } else {
            std::istringstream in(session.load("deals", o->deals_path).bytes);
            o->parsed = deals::parse_deals(in, o->sector.empty() ? std::nullopt : std::optional(o->sector));
        }
    };
    c.execute = [&session, o] {
        if (o->parsed) {
            o->dseries = deals::aggregate(o->parsed->records, *deals::parse_bucketing(o->bucketing),
                                          country_filter(o->country));
            o->series = o->dseries->counts;
        }
        const auto diag = waves::analyze(o->series, o->shape.window, o->shape.lags, o->shape.degree);
        session.emit_side(o->shape.plot_data, plot_csv(o->series, diag));
        Outcome out;
        out.result = Json{{"diagnostics", report::to_json(diag, o->series)}};
        if (o->parsed) out.result["ingestion"] = report::to_json(*o->parsed, &*o->dseries);
        std::ostringstream text;
        report::write_waves_text(text, diag, o->series);
        out.text = text.str();
        out.parameters = shape_json(o->shape);
        if (o->parsed) {
            out.parameters["bucketing"] = o->bucketing;
            out.parameters["sector"] = o->sector;
            out.parameters["country"] = o->country;
        }
        return out;
    };
    return c;
}

Command simulate_wave_command(CLI::App& app, Session& session) {
    struct Opts {
        std::string trend = "ideal", noise = "gaussian", series_out;
        std::vector<double> params;
        double sigma = 1.0;
        long length = 2048;
        long runs = 0;
        std::uint64_t seed = 0;
        bool no_clamp = false;
        WaveShape shape{12, 10, 3, {}};
        waves::TrendModel model;
    };
    auto o = std::make_shared<Opts>();
    auto* sub = app.add_subcommand("simulate-wave", "Generate a trend + noise series and run wave diagnostics");
    sub->add_option("--trend", o->trend, "ideal, linear, quadratic or exponential")
        ->capture_default_str()
        ->check(CLI::IsMember({"ideal", "linear", "quadratic", "exponential"}));
    sub->add_option("--params", o->params, "Trend coefficients (see README for the default per trend)")->delimiter(',');
    sub->add_option("--sigma", o->sigma, "Gaussian noise standard deviation")->capture_default_str();
    sub->add_option("--noise", o->noise, "gaussian or poisson")->capture_default_str()->check(CLI::IsMember({"gaussian", "poisson"}));
    sub->add_option("--length", o->length, "Series length")->capture_default_str()->check(CLI::Range(2L, 10000000L));
    sub->add_option("--seed", o->seed, "Random seed")->capture_default_str();
    sub->add_option("--runs", o->runs, "Monte Carlo repetitions comparing raw and smoothed spectra (0 = off)")
        ->capture_default_str()
        ->check(CLI::Range(0L, 1000000L));
    sub->add_flag("--no-clamp", o->no_clamp, "Allow negative values");
    sub->add_option("--series-out", o->series_out, "Write the generated series (period,value) here");
    add_shape_options(sub, o->shape);

    Command c;
    c.app = sub;
    c.prepare = [o] {
        using waves::TrendKind;
        auto& m = o->model;
        m.kind = o->trend == "linear"      ? TrendKind::Linear
                 : o->trend == "quadratic" ? TrendKind::Quadratic
                 : o->trend == "exponential" ? TrendKind::Exponential
                                             : TrendKind::Ideal;
        if (o->params.empty()) {
            switch (m.kind) {
                case TrendKind::Ideal: o->params = {10.0}; break;
                case TrendKind::Linear: o->params = {0.01, 10.0}; break;
                case TrendKind::Quadratic: o->params = {0.0, 0.0, 10.0}; break;
                case TrendKind::Exponential: o->params = {10.0, 0.0005}; break;
            }
        }
        m.parameters = o->params;
        m.noise_sigma = o->sigma;
        m.noise = o->noise == "poisson" ? waves::NoiseKind::Poisson : waves::NoiseKind::Gaussian;
        m.seed = o->seed;
        m.clamp_at_zero = !o->no_clamp;
        as_config_check([&] { waves::validate(m); });
        if (o->shape.window > o->length)
            throw Error(ErrorKind::ConfigInvalid, "--window must not exceed --length");
    };
    c.execute = [&session, o] {
        const auto raw = waves::generate_series(o->model, o->length);
        const auto diag = waves::analyze(raw, o->shape.window, o->shape.lags, o->shape.degree);
        session.emit_side(o->series_out, series_csv(raw));
        session.emit_side(o->shape.plot_data, plot_csv(raw, diag));
        Outcome out;
        out.seed = o->seed;
        out.result = Json{{"diagnostics", report::to_json(diag, raw)}};
        std::ostringstream text;
        report::write_waves_text(text, diag, raw);
        if (o->runs > 0) {
            const auto mc = waves::slutsky_yule_experiment(o->model, o->length, o->shape.window, o->runs, o->seed,
                                                           session.threads);
            out.result["monte_carlo"] = report::to_json(mc);
            text << '\n';
            report::write_slutsky_yule_text(text, mc);
        }
        out.text = text.str();
        out.parameters = shape_json(o->shape);
        out.parameters["trend"] = o->trend;
        out.parameters["params"] = o->params;
        out.parameters["sigma"] = o->sigma;
        out.parameters["noise"] = o->noise;
        out.parameters["length"] = o->length;
        out.parameters["runs"] = o->runs;
        out.parameters["clamp_at_zero"] = !o->no_clamp;
        return out;
    };
    return c;
}

Command ingest_command(CLI::App& app, Session& session) {
    struct Opts {
        std::string deals_path, sector, bucketing = "month", country, series_out, value_series_out, canonical_out;
        deals::ParseResult parsed;
    };
    auto o = std::make_shared<Opts>();
    auto* sub = app.add_subcommand("ingest", "Parse a deal table and aggregate it into count and value series");
    sub->add_option("--deals", o->deals_path, "Deal table CSV")->required()->check(CLI::ExistingFile);
    sub->add_option("--sector", o->sector, "Sector label stamped on every deal");
    sub->add_option("--bucketing", o->bucketing, "month, quarter or year")
        ->capture_default_str()
        ->check(CLI::IsMember({"month", "quarter", "year"}));
    sub->add_option("--country", o->country, "Keep deals whose target or bidder country matches");
    sub->add_option("--series-out", o->series_out, "Write deal counts (period,value) here");
    sub->add_option("--value-series-out", o->value_series_out, "Write total value USDm (period,value) here");
    sub->add_option("--canonical-out", o->canonical_out, "Write the cleaned deal table here");

    Command c;
    c.app = sub;
    c.prepare = [&session, o] {
        std::istringstream in(session.load("deals", o->deals_path).bytes);
        o->parsed = deals::parse_deals(in, o->sector.empty() ? std::nullopt : std::optional(o->sector));
    };
    c.execute = [&session, o] {
        std::optional<deals::DealSeries> series;
        if (!o->parsed.records.empty() || !o->country.empty())
            series = deals::aggregate(o->parsed.records, *deals::parse_bucketing(o->bucketing), country_filter(o->country));
        if (series) {
            session.emit_side(o->series_out, series_csv(series->counts));
            session.emit_side(o->value_series_out, series_csv(series->total_value));
        }
        if (!o->canonical_out.empty()) {
            std::ostringstream os;
            deals::write_deals(os, o->parsed.records);
            session.emit_side(o->canonical_out, os.str());
        }
        Outcome out;
        const deals::DealSeries* sp = series ? &*series : nullptr;
        out.result = report::to_json(o->parsed, sp);
        std::ostringstream text;
        report::write_ingest_text(text, o->parsed, sp);
        out.text = text.str();
        out.parameters = Json{{"bucketing", o->bucketing}, {"sector", o->sector}, {"country", o->country}};
        return out;
    };
    return c;
}

std::string render(const Session& session, std::string_view command, const Outcome& outcome) {
    if (session.format == "text") {
        std::ostringstream os;
        os << "dealdesk " << DEALDESK_VERSION << ' ' << command << '\n';
        for (const auto& in : session.inputs) os << "input " << in.role << ' ' << in.path << " sha256:" << in.sha256 << '\n';
        if (outcome.seed) os << "seed " << *outcome.seed << '\n';
        os << '\n' << outcome.text;
        return os.str();
    }
    Json inputs = Json::array();
    for (const auto& in : session.inputs)
        inputs.push_back(Json{{"role", in.role}, {"path", in.path}, {"sha256", in.sha256}, {"bytes", in.bytes.size()}});
    const Json doc{{"tool", "dealdesk"},
                   {"version", DEALDESK_VERSION},
                   {"command", command},
                   {"status", "ok"},
                   {"provenance",
                    Json{{"version", DEALDESK_VERSION},
                         {"inputs", inputs},
                         {"seed", outcome.seed ? Json(*outcome.seed) : Json(nullptr)},
                         {"parameters", outcome.parameters}}},
                   {"result", outcome.result}};
    return doc.dump(2) + "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Session session;
    CLI::App app{"M&A analytics: comparable valuation, merger economics, wave analysis", "dealdesk"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", DEALDESK_VERSION);
    app.set_config("--config", "", "Read options from a key = value file ([subcommand] sections allowed)");
    app.add_option("--format", session.format, "json or text")->capture_default_str()->check(CLI::IsMember({"json", "text"}));
    app.add_option("--output", session.output, "Write the report here instead of stdout");
    app.add_option("--threads", session.threads_flag, "Worker threads (default: DEALDESK_THREADS or all cores)")
        ->check(CLI::Range(1u, 1024u));

    std::vector<Command> commands{value_command(app, session),    event_study_command(app, session),
                                  regress_command(app, session),  waves_command(app, session),
                                  simulate_wave_command(app, session), ingest_command(app, session)};

    std::string command_name;
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        for (const auto* sub : app.get_subcommands()) command_name = sub->get_name();
        err << error_json(command_name, ErrorKind::ConfigInvalid, e.what()).dump(2) << '\n';
        return kExitConfigInvalid;
    }

    const Command* chosen = nullptr;
    for (const auto& c : commands)
        if (c.app->parsed()) chosen = &c;
    command_name = chosen->app->get_name();

    try {
        session.threads = resolve_threads(session.threads_flag);
        chosen->prepare();
        if (!session.output.empty()) {
            for (const auto& in : session.inputs)
                if (auto p = same_file(session.output, in.path))
                    throw Error(ErrorKind::ConfigInvalid, "--output would overwrite input " + *p);
        }
        const Outcome outcome = chosen->execute();
        const std::string rendered = render(session, command_name, outcome);
        if (session.output.empty())
            out << rendered;
        else
            write_atomically(session.output, rendered);
        return kExitOk;
    } catch (const Error& e) {
        err << error_json(command_name, e.kind(), e.detail()).dump(2) << '\n';
        return e.kind() == ErrorKind::ConfigInvalid ? kExitConfigInvalid : kExitModuleError;
    } catch (const std::exception& e) {
        err << error_json(command_name, ErrorKind::InvalidArgument, e.what()).dump(2) << '\n';
        return kExitModuleError;
    }
}

}  // namespace dealdesk::cli
