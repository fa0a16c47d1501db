// Command-line front end.

#include "fmzv/experiments.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iostream>

using namespace fmzv;
using nlohmann::json;

namespace {

enum class Format { Text, Json, Tsv };

struct Options {
    std::string format = "text";
    int workers = 1;
    std::string cache;
    std::string primes;
    std::optional<u32> prime;

    Format fmt() const { return format == "json" ? Format::Json : format == "tsv" ? Format::Tsv : Format::Text; }
    std::filesystem::path cache_dir() const {
        if (!cache.empty()) return cache;
        if (const char* env = std::getenv("FMZV_CACHE"); env && *env) return env;
        return "fmzv-cache";
    }
};

struct Range {
    u32 lo, hi;
};

Range parse_range(const std::string& text, Range fallback) {
    if (text.empty()) return fallback;
    auto dots = text.find("..");
    if (dots == std::string::npos) throw InvalidInput("prime range must be lo..hi, got '" + text + "'");
    try {
        std::size_t a = 0, b = 0;
        unsigned long lo = std::stoul(text.substr(0, dots), &a);
        unsigned long hi = std::stoul(text.substr(dots + 2), &b);
        if (a != dots || b != text.size() - dots - 2) throw std::invalid_argument("trailing");
        if (lo < 3 || hi < lo || hi > 2000000) throw InvalidInput("prime range must satisfy 3 <= lo <= hi");
        return {static_cast<u32>(lo), static_cast<u32>(hi)};
    } catch (const std::logic_error&) {
        throw InvalidInput("prime range must be lo..hi, got '" + text + "'");
    }
}

std::string opt_text(const std::optional<std::size_t>& v, const char* none = "?") {
    return v ? std::to_string(*v) : none;
}

json opt_json(const std::optional<std::size_t>& v) { return v ? json(*v) : json(nullptr); }

// ---------------------------------------------------------------------------

int cmd_eval(const Options& o, const std::vector<std::string>& items) {
    std::vector<u32> primes;
    if (o.prime) {
        require_odd_prime(*o.prime);
        primes = {*o.prime};
    } else {
        auto r = parse_range(o.primes, {5, 50});
        primes = primes_in_range(r.lo, r.hi);
    }
    for (auto& text : items) {
        auto e = parse_expr(text);
        std::optional<Composition> single;
        if (e.terms.size() == 1 && e.terms.begin()->second == TwistedCoeff(1) && e.terms.begin()->first.comp &&
            e.terms.begin()->first.mono.is_one())
            single = *e.terms.begin()->first.comp;
        json rows = json::array();
        for (u32 p : primes) {
            std::optional<Residue> v = single ? std::optional<Residue>(eval_comp(p, *single)) : eval_expr(p, e);
            if (o.fmt() == Format::Json) {
                rows.push_back({{"prime", p}, {"value", v ? json(v->value) : json(nullptr)}});
            } else if (primes.size() == 1 && items.size() == 1 && o.fmt() == Format::Text) {
                std::cout << (v ? std::to_string(v->value) : "undefined") << '\n';
            } else {
                std::cout << text << '\t' << p << '\t' << (v ? std::to_string(v->value) : "undefined") << '\n';
            }
        }
        if (o.fmt() == Format::Json) std::cout << json{{"symbol", text}, {"values", rows}}.dump() << '\n';
    }
    return 0;
}

int cmd_sweep(const Options& o, const std::string& family, int weight) {
    SweepConfig cfg;
    auto r = parse_range(o.primes, {5, 200});
    cfg.prime_lo = r.lo;
    cfg.prime_hi = r.hi;
    cfg.family = parse_family(family);
    cfg.weight = weight;
    cfg.cache_dir = o.cache_dir();
    cfg.workers = o.workers;
    auto res = sweep(cfg);
    if (o.fmt() == Format::Json) {
        std::cout << json{{"symbols", res.vectors.size()},
                          {"computed", res.computed},
                          {"written", res.file_written},
                          {"path", res.path.string()}}
                         .dump()
                  << '\n';
    } else if (o.fmt() == Format::Tsv) {
        for (auto& v : res.vectors)
            for (auto& [p, x] : v.entries) std::cout << v.symbol << '\t' << p << '\t' << x << '\n';
    } else {
        std::cout << res.vectors.size() << " symbols cached, " << res.computed << " new values"
                  << (res.file_written ? "" : " (no changes)") << ": " << res.path.string() << '\n';
    }
    return 0;
}

std::vector<Relation> relation_inventory(Family f, int w, const std::string& kind) {
    std::vector<Relation> out;
    auto want = [&](const char* k) { return kind == "all" || kind == k; };
    auto append = [&](std::vector<Relation> rs) {
        for (auto& r : rs) out.push_back(std::move(r));
    };
    switch (f) {
        case Family::T:
        case Family::S:
            if (want("shuffle")) append(inventory_linear_shuffle_T(w, false));
            if (want("structural")) append(inventory_T_structural(w));
            break;
        case Family::AT:
            if (want("shuffle")) append(inventory_linear_shuffle_T(w, true));
            if (want("reversal")) append(inventory_alt_reversal(w));
            break;
        case Family::ES:
            if (want("shuffle")) append(inventory_linear_shuffle_ES(w));
            if (want("reversal"))
                for (auto& c : enumerate_compositions(w, Family::ES, true)) {
                    auto r = gen_es_reversal(c);
                    if (!r.trivial()) out.push_back(std::move(r));
                }
            if (want("structural")) {
                for (int d = 1; d <= w; ++d)
                    if (w % d == 0) out.push_back(gen_homogeneous(w / d, d));
            }
            break;
    }
    return out;
}

int cmd_relations(const Options& o, const std::string& family, int weight, const std::string& kind, bool verify) {
    if (weight < 1) throw InvalidInput("relations: weight must be >= 1");
    auto rels = relation_inventory(parse_family(family), weight, kind);
    int failed = 0;
    auto r = parse_range(o.primes, {5, 300});
    for (auto& rel : rels) {
        std::optional<IdentityResult> chk;
        if (verify) {
            Identity id;
            id.id = rel.label();
            id.subject = term(rel.expr, to_string(rel.expr));
            chk = audit_identity(id, r.lo, r.hi, o.workers);
            if (chk->status != Status::Verified) ++failed;
        }
        if (o.fmt() == Format::Json) {
            json j{{"provenance", rel.label()}, {"relation", to_string(rel.expr)}};
            if (chk) j["status"] = status_name(chk->status);
            std::cout << j.dump() << '\n';
        } else {
            std::cout << to_string(rel);
            if (chk) std::cout << '\t' << status_name(chk->status);
            std::cout << '\n';
        }
    }
    if (o.fmt() == Format::Text) std::cerr << rels.size() << " relations" << (verify ? ", " + std::to_string(failed) + " failed" : "") << '\n';
    return failed ? 1 : 0;
}

json dim_json(const DimReport& d) {
    json j{{"family", family_name(d.family)},
           {"weight", d.weight},
           {"lower", opt_json(d.lower)},
           {"upper", opt_json(d.upper)},
           {"upper_method", d.upper_method},
           {"paper", opt_json(d.paper)},
           {"symbols", d.symbols},
           {"symbols_used", d.symbols_used},
           {"primes", d.primes},
           {"plateau", d.plateau},
           {"lower_at_75", opt_json(d.lower_at_75)},
           {"seconds", d.seconds},
           {"basis", d.basis},
           {"note", d.note}};
    if (d.paper_classical) j["paper_classical"] = *d.paper_classical;
    if (d.upper_plus) j["upper_plus"] = *d.upper_plus;
    if (d.upper_minus) j["upper_minus"] = *d.upper_minus;
    if (d.inventory) j["inventory_upper"] = d.inventory->upper;
    return j;
}

int cmd_dims(const Options& o, const std::string& family, const std::string& weights, bool verbose,
             std::size_t max_relations) {
    Family f = parse_family(family);
    int lo = 0, hi = 0;
    if (auto dots = weights.find(".."); dots != std::string::npos) {
        lo = std::stoi(weights.substr(0, dots));
        hi = std::stoi(weights.substr(dots + 2));
    } else {
        lo = hi = std::stoi(weights);
    }
    if (lo < 0 || hi < lo || hi > 20) throw InvalidInput("dims: weight must be in 0..20");
    DimsConfig cfg;
    auto r = parse_range(o.primes, {5, 2000});
    cfg.prime_lo = r.lo;
    cfg.prime_hi = r.hi;
    cfg.workers = o.workers;
    cfg.inventory_relations = max_relations;
    if (!o.cache.empty() || std::getenv("FMZV_CACHE")) cfg.cache_dir = o.cache_dir();
    bool inconsistent = false;
    if (o.fmt() == Format::Tsv) std::cout << "family\tweight\tlower\tupper\tpaper\tplateau\tnote\n";
    for (int w = lo; w <= hi; ++w) {
        auto d = dims(f, w, cfg);
        inconsistent = inconsistent || !d.consistent();
        if (o.fmt() == Format::Json) {
            std::cout << dim_json(d).dump() << '\n';
        } else if (o.fmt() == Format::Tsv) {
            std::cout << family_name(f) << '\t' << w << '\t' << opt_text(d.lower) << '\t' << opt_text(d.upper) << '\t'
                      << opt_text(d.paper, "-") << '\t' << (d.plateau ? "yes" : "no") << '\t' << d.note << '\n';
        } else {
            if (lo != hi) std::cout << "w=" << w << ' ';
            std::cout << "lower=" << opt_text(d.lower) << " upper=" << opt_text(d.upper)
                      << " paper=" << opt_text(d.paper, "-") << '\n';
            if (verbose) {
                std::cout << "  upper bound: " << d.upper_method << '\n';
                if (d.paper_classical) std::cout << "  classical table value: " << *d.paper_classical << '\n';
                if (d.upper_plus)
                    std::cout << "  class split: t=+1 " << *d.upper_plus << ", t=-1 " << *d.upper_minus << '\n';
                std::cout << "  symbols " << d.symbols_used << "/" << d.symbols << ", primes " << d.primes
                          << ", plateau " << (d.plateau ? "yes" : "no") << ", " << d.seconds << " s\n";
                if (!d.basis.empty()) {
                    std::cout << "  basis:";
                    for (auto& b : d.basis) std::cout << ' ' << b;
                    std::cout << '\n';
                }
                if (!d.note.empty()) std::cout << "  note: " << d.note << '\n';
            }
        }
    }
    return inconsistent ? 1 : 0;
}

void print_report(const AuditReport& rep, Format fmt, bool verbose) {
    for (auto& i : rep.items) {
        if (fmt == Format::Json) {
            json j{{"suite", rep.suite},          {"id", i.id},
                   {"statement", i.statement},    {"status", status_name(i.status)},
                   {"primes_checked", i.primes_checked}, {"failures", i.failures},
                   {"failure_count", i.failure_count}};
            if (!i.fitted.empty()) {
                json c = json::object();
                for (std::size_t k = 0; k < i.fitted.size(); ++k)
                    if (i.fitted[k] != 0) c[i.fit_basis[k]] = i.fitted[k].get_str();
                j["fitted"] = c;
                j["fit_disjoint_primes"] = i.disjoint_primes;
            }
            if (!i.reading.empty()) j["reading"] = i.reading;
            if (!i.note.empty()) j["note"] = i.note;
            std::cout << j.dump() << '\n';
        } else if (fmt == Format::Tsv) {
            std::cout << rep.suite << '\t' << i.id << '\t' << status_name(i.status) << '\t' << i.primes_checked << '\t'
                      << i.statement << '\t' << (i.reading.empty() ? fit_text(i) : i.reading) << '\n';
        } else if (verbose || i.status != Status::Verified) {
            std::cout << "  [" << status_name(i.status) << "] " << i.id << ": " << i.statement << '\n';
            if (!i.failures.empty()) {
                std::cout << "      fails at p =";
                for (auto p : i.failures) std::cout << ' ' << p;
                if (i.failure_count > i.failures.size()) std::cout << " ... (" << i.failure_count << " primes)";
                std::cout << '\n';
            }
            if (!i.reading.empty()) std::cout << "      reading: " << i.reading << '\n';
            else if (i.status == Status::SuspectedTypo) std::cout << "      fitted: " << fit_text(i) << '\n';
            if (i.status == Status::SuspectedTypo)
                std::cout << "      correction verified at " << i.disjoint_primes << " disjoint primes\n";
            if (!i.note.empty()) std::cout << "      note: " << i.note << '\n';
        }
    }
    if (fmt == Format::Text)
        std::cout << rep.suite << " (primes " << rep.lo << ".." << rep.hi << "): " << rep.count(Status::Verified)
                  << " verified, " << rep.count(Status::SuspectedTypo) << " suspected-typo, "
                  << rep.count(Status::Failed) << " failed\n";
}

void print_monitor(const MonitorReport& m, Format fmt) {
    for (auto& i : m.items) {
        if (fmt == Format::Json)
            std::cout << json{{"monitor", m.name}, {"id", i.id}, {"statement", i.statement}, {"holds", i.holds},
                              {"detail", i.detail}}
                             .dump()
                      << '\n';
        else if (fmt == Format::Tsv)
            std::cout << m.name << '\t' << i.id << '\t' << (i.holds ? "holds" : "fails") << '\t' << i.statement << '\t'
                      << i.detail << '\n';
    }
    if (fmt != Format::Text) return;
    std::cout << m.name << ": " << m.title << '\n';
    for (auto& i : m.items)
        std::cout << "  [" << (i.holds ? "holds" : "fails") << "] " << i.id << ": " << i.statement << " (" << i.detail
                  << ")\n";
}

int cmd_audit(const Options& o, std::vector<std::string> suites, const std::vector<std::string>& monitors, bool all,
              bool list, bool verbose) {
    if (list) {
        for (auto& s : audit_suites())
            std::cout << s.name << '\t' << s.lo << ".." << s.hi << '\t' << s.title << '\n';
        for (auto& [n, t] : monitor_names()) std::cout << n << "\tmonitor\t" << t << '\n';
        return 0;
    }
    if (all)
        for (auto& s : audit_suites()) suites.push_back(s.name);
    if (suites.empty() && monitors.empty()) throw InvalidInput("audit: give --suite, --monitor, --all or --list");
    std::optional<u32> lo, hi;
    if (!o.primes.empty()) {
        auto r = parse_range(o.primes, {5, 300});
        lo = r.lo;
        hi = r.hi;
    }
    bool failed = false;
    for (auto& s : suites) {
        auto rep = audit(s, lo, hi, o.workers);
        print_report(rep, o.fmt(), verbose);
        failed = failed || !rep.ok();
    }
    for (auto& m : monitors) print_monitor(run_monitor(m, lo.value_or(5), hi.value_or(300), o.workers), o.fmt());
    return failed ? 1 : 0;
}

int cmd_fit(const Options& o, const std::string& target, const std::vector<std::string>& basis) {
    if (basis.empty()) throw InvalidInput("fit: give at least one --basis term");
    auto r = parse_range(o.primes, {5, 300});
    std::vector<Expr> b;
    for (auto& x : basis) b.push_back(parse_expr(x));
    auto fit = fit_combination(parse_expr(target), b, r.lo, r.hi, o.workers);
    if (o.fmt() == Format::Json) {
        json j{{"target", target}, {"ok", fit.ok}, {"primes_checked", fit.primes_checked}};
        if (fit.ok) {
            json c = json::object();
            for (std::size_t i = 0; i < basis.size(); ++i) c[basis[i]] = fit.coeffs[i].get_str();
            j["coefficients"] = c;
        } else if (fit.violating_prime) {
            j["violating_prime"] = *fit.violating_prime;
        }
        std::cout << j.dump() << '\n';
    } else if (fit.ok) {
        for (std::size_t i = 0; i < basis.size(); ++i)
            std::cout << basis[i] << (o.fmt() == Format::Tsv ? "\t" : " = ") << fit.coeffs[i].get_str() << '\n';
    } else {
        std::cout << "no fit";
        if (fit.violating_prime) std::cout << " (first violating prime " << *fit.violating_prime << ")";
        std::cout << '\n';
    }
    return fit.ok ? 0 : 1;
}

int cmd_wieferich(const Options& o, u32 max, u32 mod, u32 res) {
    auto hits = wieferich_scan(max, mod, res);
    if (o.fmt() == Format::Json) {
        std::cout << json(hits).dump() << '\n';
    } else if (o.fmt() == Format::Tsv) {
        for (auto p : hits) std::cout << p << '\n';
    } else {
        for (std::size_t i = 0; i < hits.size(); ++i) std::cout << (i ? ", " : "") << hits[i];
        std::cout << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite multiple T-values, Euler sums and their relations"};
    app.require_subcommand(1);
    Options o;
    auto add_common = [&](CLI::App* c) {
        c->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json", "tsv"}));
        c->add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber);
        c->add_option("--cache", o.cache, "Sweep cache directory (default: $FMZV_CACHE or ./fmzv-cache)");
        c->add_option("--primes", o.primes, "Prime range lo..hi");
    };

    auto* eval = app.add_subcommand("eval", "Evaluate symbols or expressions mod p");
    std::vector<std::string> eval_items;
    eval->add_option("symbol", eval_items, "Symbols such as T:1,1,1 or expressions such as 3/16*beta3")->required();
    eval->add_option("--prime", o.prime, "Single prime");
    add_common(eval);

    auto* sw = app.add_subcommand("sweep", "Evaluate a family inventory over a prime range into the cache");
    std::string family = "T";
    int weight = 1;
    sw->add_option("--family", family, "es, t, s or at")->required();
    sw->add_option("--weight", weight, "Weight")->required()->check(CLI::Range(1, 20));
    add_common(sw);

    auto* rel = app.add_subcommand("relations", "Print the relation inventory of a weight");
    std::string kind = "all";
    bool verify = false;
    rel->add_option("--family", family, "es, t or at")->required();
    rel->add_option("--weight", weight, "Weight")->required()->check(CLI::Range(1, 12));
    rel->add_option("--kind", kind, "all, shuffle, reversal or structural")
        ->check(CLI::IsMember({"all", "shuffle", "reversal", "structural"}));
    rel->add_flag("--verify", verify, "Check every relation over the prime range");
    add_common(rel);

    auto* dm = app.add_subcommand("dims", "Dimension bounds compared with the table");
    std::string weights = "1";
    bool verbose = false;
    std::size_t max_relations = 0;
    dm->add_option("--family", family, "t, at or es")->required();
    dm->add_option("--weight", weights, "Weight or range a..b")->required();
    dm->add_option("--max-relations", max_relations, "Cap on inventory relations for weight >= 9 (0: all)");
    dm->add_flag("-v,--verbose", verbose, "Show method, basis and notes");
    add_common(dm);

    auto* au = app.add_subcommand("audit", "Verify identity suites; run conjecture monitors");
    std::vector<std::string> suites, monitors;
    bool all = false, list = false;
    au->add_option("--suite", suites, "Suite name (repeatable)");
    au->add_option("--monitor", monitors, "Conjecture monitor (repeatable)");
    au->add_flag("--all", all, "Run every suite");
    au->add_flag("--list", list, "List suites and monitors");
    au->add_flag("-v,--verbose", verbose, "Show verified identities too");
    add_common(au);

    auto* ft = app.add_subcommand("fit", "Fit rational coefficients of a target over a basis");
    std::string target;
    std::vector<std::string> basis;
    ft->add_option("target", target, "Target symbol or expression")->required();
    ft->add_option("--basis", basis, "Basis term (repeatable)")->required();
    add_common(ft);

    auto* wf = app.add_subcommand("wieferich", "Primes p <= max, p = res (mod m), with 2^(p-1) = 1 mod p^2");
    u32 wmax = 10000, wmod = 1, wres = 0;
    wf->add_option("--max", wmax, "Upper limit")->check(CLI::Range(2u, 2000000000u));
    wf->add_option("--mod", wmod, "Modulus")->check(CLI::PositiveNumber);
    wf->add_option("--res", wres, "Residue");
    add_common(wf);

    CLI11_PARSE(app, argc, argv);
    try {
        if (*eval) return cmd_eval(o, eval_items);
        if (*sw) return cmd_sweep(o, family, weight);
        if (*rel) return cmd_relations(o, family, weight, kind, verify);
        if (*dm) return cmd_dims(o, family, weights, verbose, max_relations);
        if (*au) return cmd_audit(o, suites, monitors, all, list, verbose);
        if (*ft) return cmd_fit(o, target, basis);
        if (*wf) return cmd_wieferich(o, wmax, wmod, wres);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
