#include "glevy/cli.hpp"

#include "glevy/analysis.hpp"
#include "glevy/config.hpp"
#include "glevy/errors.hpp"
#include "glevy/fnspace.hpp"
#include "glevy/path_io.hpp"
#include "glevy/path_ops.hpp"
#include "glevy/pide.hpp"
#include "glevy/simulate.hpp"
#include "glevy/transport.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

namespace glevy::cli {

namespace {

using config::Json;

struct Options {
    std::string configFile;
    std::string outDir;
    std::optional<std::uint64_t> seed;
    std::string method;
    bool quiet = false;
};

struct Context {
    Json cfg = Json::object();
    std::filesystem::path cfgDir;
    const Options* options = nullptr;
};

struct Outcome {
    Json record = Json::object();
    /// file name -> contents
    std::map<std::string, std::string> files;
    int status = kOk;
};

/// Finite doubles as numbers, everything else as null so the record stays valid JSON.
Json num(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json pointJson(const Point& p) {
    if (p.size() == 1) return num(p[0]);
    Json a = Json::array();
    for (double c : p) a.push_back(num(c));
    return a;
}

Json supJson(const SupResult& r) { return {{"value", num(r.value)}, {"argmax", r.argmax}}; }

const Json& section(const Context& ctx, const char* key) {
    if (!ctx.cfg.contains(key)) throw InvalidInput(std::string("config needs a '") + key + "' section");
    return ctx.cfg.at(key);
}

double cfgNumber(const Context& ctx, const char* key, double fallback) {
    if (!ctx.cfg.contains(key)) return fallback;
    if (!ctx.cfg.at(key).is_number()) throw InvalidInput(std::string("key '") + key + "' must be a number");
    return ctx.cfg.at(key).get<double>();
}

std::filesystem::path resolve(const Context& ctx, const std::string& file) {
    std::filesystem::path p(file);
    return p.is_absolute() ? p : ctx.cfgDir / p;
}

BaseMeasure baseMeasure(const Context& ctx) {
    if (!ctx.cfg.contains("base")) return TailDensity::inverseSquare();
    const Json& b = ctx.cfg.at("base");
    return TailDensity::powerLaw(b.value("scale", 1.0), b.value("alpha", 1.0));
}

config::McConfig mcConfig(const Context& ctx, double horizon) {
    config::McConfig mc = config::mc(ctx.cfg.value("mc", Json::object()));
    if (ctx.options->seed) mc.seed = ctx.options->seed;
    if (!mc.seed) throw InvalidInput("stochastic commands need a seed (mc.seed or --seed)");
    mc.setup.horizon = horizon;
    mc.setup.base = baseMeasure(ctx);
    return mc;
}

std::vector<ControlPolicy> candidates(const UncertaintySet& U, const config::McConfig& mc) {
    if (mc.controlIntervals == 1) return constantControls(U, mc.setup.base, mc.setup.horizon);
    return piecewiseConstantControls(U, mc.setup.base, mc.setup.horizon, mc.controlIntervals, mc.maxPolicies);
}

Json mcJson(const McEstimate& e) {
    Json means = Json::array();
    for (double m : e.means) means.push_back(num(m));
    return {{"value", num(e.value)}, {"stdError", num(e.stdError)}, {"argmax", e.argmax},
            {"nPaths", e.nPaths}, {"candidates", e.means.size()}, {"means", means}};
}

std::string pathCsv(const CadlagPath& path) {
    std::ostringstream s;
    writePathCsv(s, path);
    return s.str();
}

Outcome cmdValidate(const Context& ctx) {
    const UncertaintySet U = config::uncertainty(section(ctx, "uncertainty"));
    const Json moments = ctx.cfg.value("moments", Json::object());
    const ValidationReport r = validate(U, moments.value("q", 0.5), moments.value("p", 2.0));
    Outcome o;
    o.record = {{"size", U.size()},
                {"dim", U.dim()},
                {"q", r.q},
                {"p", r.p},
                {"bound", supJson(r.bound)},
                {"smallJumpMoment", supJson(r.smallJumpMoment)},
                {"largeJumpMoment", supJson(r.largeJumpMoment)},
                {"boundFinite", r.boundFinite},
                {"smallJumpFinite", r.smallJumpFinite},
                {"largeJumpFinite", r.largeJumpFinite},
                {"passed", r.passed()}};
    if (!r.passed()) o.status = kAssumptionViolated;
    return o;
}

Outcome cmdExpect(const Context& ctx) {
    const UncertaintySet U = config::uncertainty(section(ctx, "uncertainty"));
    const ScalarFunction phi = config::payoff(section(ctx, "payoff"));
    const double t = cfgNumber(ctx, "t", 1.0);
    const double x0 = cfgNumber(ctx, "x0", 0.0);
    std::string method = ctx.options->method;
    if (method.empty()) method = ctx.cfg.value("method", std::string("pide"));
    if (method != "pide" && method != "mc" && method != "both") {
        throw InvalidInput("method must be pide, mc or both");
    }

    Outcome o;
    o.record["t"] = t;
    o.record["x0"] = x0;
    o.record["method"] = method;
    std::optional<double> pideValue;
    std::optional<McEstimate> mcValue;
    if (method != "mc") {
        Grid1D g;
        g.T = t;
        g = config::grid(ctx.cfg.value("grid", Json::object()), g);
        g.T = t;
        const GridSolution sol = solveIPDE(phi, U, g);
        pideValue = sol.terminalAt(x0);
        Json pide = {{"value", num(*pideValue)},
                     {"cflNumber", sol.diagnostics.cflNumber},
                     {"steps", sol.diagnostics.steps},
                     {"argmaxCounts", sol.diagnostics.argmaxCounts}};
        if (ctx.cfg.value("refine", true)) {
            const RefinedValue r = solveWithRefinement(phi, U, g, x0);
            pide["refinedValue"] = num(r.fine);
            pide["schemeError"] = num(r.schemeError);
        }
        o.record["pide"] = pide;
        if (ctx.cfg.value("writeSolution", false)) {
            std::ostringstream s;
            writeSolutionCsv(s, sol);
            o.files["solution.csv"] = s.str();
        }
    }
    if (method != "pide") {
        const config::McConfig mc = mcConfig(ctx, t);
        const auto xi = [&phi, x0, t](const CadlagPath& path) { return phi(Point{x0 + path.value(t)[0]}); };
        mcValue = estimateUpperExpectation(xi, U, candidates(U, mc), mc.nPaths, *mc.seed, mc.setup);
        o.record["mc"] = mcJson(*mcValue);
        o.record["seed"] = *mc.seed;
    }
    if (pideValue && mcValue) {
        o.record["duality"] = {{"pideValue", num(*pideValue)},
                               {"mcValue", num(mcValue->value)},
                               {"stdError", num(mcValue->stdError)},
                               {"gap", num(*pideValue - mcValue->value)},
                               {"mcWithinBound", mcValue->value <= *pideValue + 3.0 * mcValue->stdError}};
    }
    return o;
}

Outcome cmdGPoisson(const Context& ctx) {
    const ScalarFunction phi = config::payoff(section(ctx, "payoff"));
    const double lo = cfgNumber(ctx, "lambdaMin", 1.0);
    const double hi = cfgNumber(ctx, "lambdaMax", lo);
    const double t = cfgNumber(ctx, "t", 1.0);
    const double v =
        gPoissonDistribution(lo, hi, t, [&phi](long n) { return phi(Point{static_cast<double>(n)}); });
    Outcome o;
    o.record = {{"lambdaMin", lo}, {"lambdaMax", hi}, {"t", t}, {"value", num(v)}};
    return o;
}

Outcome cmdCapacity(const Context& ctx) {
    const UncertaintySet U = config::uncertainty(section(ctx, "uncertainty"));
    if (!ctx.cfg.contains("region") && !ctx.cfg.contains("event")) {
        throw InvalidInput("capacity needs a 'region' or an 'event'");
    }
    Outcome o;
    if (ctx.cfg.contains("region")) {
        const Region A = config::region(ctx.cfg.at("region"));
        o.record["region"] = A.describe();
        o.record["vCapacity"] = supJson(vCapacity(U.measures(), A));
    }
    if (ctx.cfg.contains("event")) {
        const double t = cfgNumber(ctx, "t", 1.0);
        const config::McConfig mc = mcConfig(ctx, t);
        const PathEvent ev = config::event(ctx.cfg.at("event"));
        o.record["t"] = t;
        o.record["seed"] = *mc.seed;
        o.record["capacity"] = mcJson(estimateCapacity(ev, U, candidates(U, mc), mc.nPaths, *mc.seed, mc.setup));
    }
    return o;
}

Outcome cmdErlang(const Context& ctx) {
    const UncertaintySet U = config::uncertainty(section(ctx, "uncertainty"));
    const Region A = config::region(section(ctx, "A"));
    const Region B = config::region(section(ctx, "B"));
    const auto k = static_cast<std::size_t>(cfgNumber(ctx, "k", 1.0));
    const double t = cfgNumber(ctx, "t", 1.0);
    const double lo = cfgNumber(ctx, "lo", 0.0);
    const double hi = cfgNumber(ctx, "hi", t);
    const config::McConfig mc = mcConfig(ctx, t);
    const ErlangCheck c = erlangBoundCheck(U, A, B, k, lo, hi, mc.nPaths, *mc.seed, mc.setup);
    Outcome o;
    o.record = {{"k", k},
                {"lo", c.lo},
                {"hi", c.hi},
                {"seed", *mc.seed},
                {"analyticBound", num(c.analyticBound)},
                {"boundArgmax", c.boundArgmax},
                {"mc", mcJson(c.mc)},
                {"pass", c.pass}};
    return o;
}

Outcome cmdCompensate(const Context& ctx) {
    const UncertaintySet U = config::uncertainty(section(ctx, "uncertainty"));
    const CadlagPath path = loadPathCsv(resolve(ctx, section(ctx, "path").get<std::string>()));
    const CadlagPath y = compensate(path, U);
    Outcome o;
    o.record = {{"mean", pointJson(meanOfJumpPart(U, 1.0))},
                {"horizon", path.horizon()},
                {"jumps", path.jumps().size()},
                {"terminalValue", pointJson(y.value(path.horizon()))}};
    o.files["compensated.csv"] = pathCsv(y);
    return o;
}

Outcome cmdMartingale(const Context& ctx) {
    const UncertaintySet U = config::uncertainty(section(ctx, "uncertainty"));
    const ProcessKind kind = processKindFromString(ctx.cfg.value("process", std::string("compensatedJumpPart")));
    ProcessSpec spec{kind, U, {}, {}};
    const double s = cfgNumber(ctx, "s", 0.0);
    const double t = cfgNumber(ctx, "t", 1.0);
    const Grid1D g = config::grid(ctx.cfg.value("grid", Json::object()));
    const MartingaleReport r = martingaleCheck(spec, s, t, g);
    Outcome o;
    o.record = {{"process", toString(r.kind)},
                {"s", r.s},
                {"t", r.t},
                {"maxDeviation", num(r.maxDeviation)},
                {"symmetricDeviation", num(r.symmetricDeviation)},
                {"schemeError", num(r.schemeError)},
                {"tolerance", num(r.tolerance)},
                {"isMartingale", r.isMartingale},
                {"isSymmetric", r.isSymmetric}};
    return o;
}

Outcome cmdDecompose(const Context& ctx) {
    const CadlagPath path = loadPathCsv(resolve(ctx, section(ctx, "path").get<std::string>()));
    const Decomposition d = decompose(path);
    std::vector<double> times = path.eventTimes();
    for (const auto& j : path.jumps()) times.push_back(j.time);
    double err = 0.0;
    for (double s : times) {
        err = std::max(err, maxAbsDifference(d.continuous.value(s) + d.jumps.value(s), path.value(s)));
    }
    Outcome o;
    o.record = {{"horizon", path.horizon()}, {"jumps", path.jumps().size()}, {"maxReconstructionError", num(err)}};
    o.files["continuous.csv"] = pathCsv(d.continuous);
    o.files["jumps.csv"] = pathCsv(d.jumps);
    return o;
}

Outcome cmdTransport(const Context& ctx) {
    MeasureFamily targets;
    if (ctx.cfg.contains("targets")) {
        for (const auto& m : ctx.cfg.at("targets")) targets.push_back(config::measure(m));
    } else {
        targets = config::uncertainty(section(ctx, "uncertainty")).measures();
    }
    const BaseMeasure base = baseMeasure(ctx);
    const auto eps = ctx.cfg.value("eps", std::vector<double>{0.1, 0.5, 1.0});
    Outcome o;
    Json maps = Json::array();
    std::ostringstream csv;
    csv << "measure,piece,lower,upper,target,weight\n";
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const TransportMap g = transportMap(base, targets[i]);
        double massError = 0.0;
        for (const auto& a : targets[i].atoms()) {
            massError = std::max(massError, std::abs(g.preimageMass(a.location) - a.weight));
        }
        Json radii = Json::array();
        for (double e : eps) radii.push_back({{"eps", e}, {"radius", num(g.separationRadius(e))}});
        maps.push_back({{"pieces", g.pieces().size()}, {"maxMassError", num(massError)}, {"separation", radii}});
        for (std::size_t k = 0; k < g.pieces().size(); ++k) {
            const auto& p = g.pieces()[k];
            csv << i << ',' << k << ',' << formatShortest(p.lower) << ',' << formatShortest(p.upper) << ','
                << formatShortest(p.target[0]) << ',' << formatShortest(p.weight) << '\n';
        }
    }
    o.record["maps"] = maps;
    o.files["transport.csv"] = csv.str();
    return o;
}

Outcome cmdFnspace(const Context& ctx) {
    const TestFunction f = config::testFunction(section(ctx, "function"));
    const MeasureFamily V = config::uncertainty(section(ctx, "uncertainty")).measures();
    const Region A = ctx.cfg.contains("region") ? config::region(ctx.cfg.at("region")) : Region::punctured(1);
    const double p = cfgNumber(ctx, "p", 1.0);
    MembershipOptions opts;
    opts.epsLadder = ctx.cfg.value("eps", opts.epsLadder);
    opts.nLadder = ctx.cfg.value("n", opts.nLadder);
    opts.threshold = cfgNumber(ctx, "threshold", opts.threshold);
    const MembershipVerdict m = membershipLpb(f, A, V, p, opts);
    const QcVerdict qc = qcCriterion(f, V);

    Outcome o;
    o.record["p"] = p;
    o.record["norm"] = num(m.norm);
    o.record["membership"] = {{"member", m.member},
                              {"normFinite", m.normFinite},
                              {"tight", m.tight},
                              {"uniformlyIntegrable", m.uniformlyIntegrable}};
    const char* status = qc.status == QcStatus::quasiContinuous      ? "quasiContinuous"
                         : qc.status == QcStatus::notQuasiContinuous ? "notQuasiContinuous"
                                                                     : "inconclusive";
    Json q = {{"status", status}, {"capacity", num(qc.capacity)}};
    if (qc.witness) {
        q["witness"] = pointJson(*qc.witness);
        q["witnessMeasure"] = *qc.witnessMeasure;
    }
    o.record["qc"] = q;
    std::ostringstream tight;
    writeTightnessCsv(tight, m.tightness);
    o.files["tightness.csv"] = tight.str();
    std::ostringstream ui;
    writeIntegrabilityCsv(ui, m.integrability);
    o.files["integrability.csv"] = ui.str();
    return o;
}

Outcome cmdCounterexample(const Context& ctx) {
    const double t = cfgNumber(ctx, "t", 0.5);
    const double T = cfgNumber(ctx, "horizon", 1.0);
    const double n = cfgNumber(ctx, "n", 100.0);
    if (!(n >= 1.0)) throw InvalidInput("n must be at least 1");
    const CadlagPath limit = counterexampleFamily(t, 1.0, T);
    const CadlagPath shifted = counterexampleFamily(t + 1.0 / n, 1.0 + 1.0 / n, T);
    const Region one = Region::point(1.0);
    const ScalarFunction unit = [](const Point&) { return 1.0; };
    const double atLimit = poissonIntegralScalar(limit, unit, one, T);
    const double atShifted = poissonIntegralScalar(shifted, unit, one, T);
    const MeasureFamily V{DiscreteLevyMeasure::dirac(1.0), DiscreteLevyMeasure::dirac(1.5),
                          DiscreteLevyMeasure::dirac(2.0)};
    TestFunction f{[](const Point& z) { return z[0] == 1.0 ? 1.0 : 0.0; }, one, one};
    const QcVerdict qc = qcCriterion(f, V);

    Outcome o;
    o.record = {{"t", t},
                {"n", n},
                {"horizon", T},
                {"skorohodUpper", num(skorohodDistanceUpper(shifted, limit))},
                {"integralAtLimit", atLimit},
                {"integralAtShifted", atShifted},
                {"integralGap", std::abs(atLimit - atShifted)},
                {"qc",
                 {{"status", qc.status == QcStatus::notQuasiContinuous ? "notQuasiContinuous" : "quasiContinuous"},
                  {"capacity", qc.capacity},
                  {"witness", qc.witness ? pointJson(*qc.witness) : Json(nullptr)}}}};
    o.files["limit.csv"] = pathCsv(limit);
    o.files["shifted.csv"] = pathCsv(shifted);
    return o;
}

void writeFile(const std::filesystem::path& file, const std::string& contents) {
    std::ofstream f(file, std::ios::binary);
    if (!f) throw InvalidInput("cannot write '" + file.string() + "'");
    f << contents;
}

void emit(const std::string& command, const Outcome& o, const Options& opts, double wallTime, std::ostream& out) {
    const std::string record = o.record.dump(2) + "\n";
    if (!opts.outDir.empty()) {
        const std::filesystem::path dir(opts.outDir);
        std::filesystem::create_directories(dir);
        writeFile(dir / (command + ".json"), record);
        for (const auto& [name, contents] : o.files) writeFile(dir / name, contents);
        writeFile(dir / (command + ".timing.json"), Json{{"wallTime", wallTime}}.dump(2) + "\n");
    }
    if (!opts.quiet) out << record;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    using Handler = std::function<Outcome(const Context&)>;
    const std::vector<std::tuple<std::string, std::string, Handler, bool>> commands{
        {"validate", "Check the uniform bound and moment assumptions", cmdValidate, true},
        {"expect", "Sublinear expectation by integro-PDE, Monte Carlo or both", cmdExpect, true},
        {"gpoisson", "Sublinear expectation of phi(N_t) for a G-Poisson process", cmdGPoisson, true},
        {"capacity", "V-capacity of a region and/or path capacity of an event", cmdCapacity, true},
        {"erlang-bound", "Compare the Erlang lower bound with a Monte Carlo capacity", cmdErlang, true},
        {"compensate", "Compensate the jump part of a path", cmdCompensate, true},
        {"martingale-check", "G-martingale and symmetry check of a derived process", cmdMartingale, true},
        {"decompose", "Split a path into continuous and jump parts", cmdDecompose, true},
        {"transport", "Transport maps from the base measure onto target measures", cmdTransport, true},
        {"fnspace", "Norm, profiles, membership and quasi-continuity of a test function", cmdFnspace, true},
        {"counterexample", "Skorohod-close paths with Poisson integrals one apart", cmdCounterexample, false},
    };

    Options opts;
    CLI::App app{"Numerical toolkit for G-Levy processes", "glevy"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);
    std::map<std::string, CLI::App*> subs;
    for (const auto& [name, help, handler, needsConfig] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        auto* c = sub->add_option("--config", opts.configFile, "JSON config file");
        if (needsConfig) c->required();
        sub->add_option("--out", opts.outDir, "Output directory for the record and CSVs");
        sub->add_option("--seed", opts.seed, "Seed override for stochastic commands");
        sub->add_option("--method", opts.method, "pide, mc or both (expect)")
            ->check(CLI::IsMember({"pide", "mc", "both"}));
        sub->add_flag("--quiet", opts.quiet, "Do not print the record");
        subs[name] = sub;
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kParseError;
    }

    std::string command;
    Handler handler;
    for (const auto& [name, help, h, needsConfig] : commands) {
        if (subs[name]->parsed()) {
            command = name;
            handler = h;
        }
    }

    Context ctx;
    ctx.options = &opts;
    Outcome outcome;
    const auto start = std::chrono::steady_clock::now();
    try {
        if (!opts.configFile.empty()) {
            ctx.cfg = config::load(opts.configFile);
            ctx.cfgDir = std::filesystem::path(opts.configFile).parent_path();
            if (!ctx.cfg.is_object()) throw InvalidInput("config must be a JSON object");
        }
        outcome = handler(ctx);
    } catch (const PreconditionViolation& e) {
        outcome.status = kAssumptionViolated;
        outcome.record = {{"error", e.what()}};
    } catch (const Unsupported& e) {
        outcome.status = kAssumptionViolated;
        outcome.record = {{"error", e.what()}};
    } catch (const InvalidInput& e) {
        err << "glevy " << command << ": " << e.what() << '\n';
        return kParseError;
    } catch (const Json::exception& e) {
        err << "glevy " << command << ": malformed config: " << e.what() << '\n';
        return kParseError;
    } catch (const Error& e) {
        err << "glevy " << command << ": numerical abort: " << e.what() << '\n';
        return kNumericalAbort;
    }
    const double wallTime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    Json record = {{"command", command},
                   {"version", kVersion},
                   {"configHash", config::hash(ctx.cfg)},
                   {"status", outcome.status == kOk ? "ok" : "assumptionViolated"}};
    if (!outcome.record.contains("seed")) {
        record["seed"] = opts.seed ? Json(*opts.seed) : Json(nullptr);
    }
    record.update(outcome.record);
    outcome.record = std::move(record);
    try {
        emit(command, outcome, opts, wallTime, out);
    } catch (const std::exception& e) {
        err << "glevy " << command << ": " << e.what() << '\n';
        return kParseError;
    }
    if (outcome.status == kAssumptionViolated) {
        err << "glevy " << command << ": assumption violated\n";
    }
    return outcome.status;
}

}  // namespace glevy::cli
