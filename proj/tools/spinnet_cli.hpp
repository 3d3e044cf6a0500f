#pragma once

// Command-line front end. run() is kept separate from main() so tests can
// drive it in-process.

#include "spinnet/asymptotics.hpp"
#include "spinnet/hyperquant.hpp"
#include "spinnet/recoupling.hpp"
#include "spinnet/spin_graph.hpp"
#include "spinnet/wigner.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace spinnet::cli {

enum ExitCode { kOk = 0, kDomainError = 1, kUsageError = 2 };

namespace detail {

inline std::vector<std::string> split(const std::string &text, char sep = ',') {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else if (c != ' ') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

inline std::vector<HalfInt> parse_spins(const std::string &text, std::size_t expected, const char *what) {
    std::vector<HalfInt> out;
    for (const auto &tok : split(text))
        out.push_back(HalfInt::parse(tok));
    if (expected != 0 && out.size() != expected)
        throw Error(ErrorKind::MalformedSpin, std::string(what) + " needs " + std::to_string(expected) + " values, got " +
                                                  std::to_string(out.size()));
    return out;
}

inline SixSpins six(const std::string &text) {
    auto v = parse_spins(text, 6, "--spins");
    SixSpins s;
    std::copy(v.begin(), v.end(), s.begin());
    return s;
}

/// "p" or "p/q".
inline Rational parse_rational(const std::string &text) {
    auto fail = [&] { return Error(ErrorKind::InvalidParams, "cannot parse rational '" + text + "'"); };
    if (text.empty() || text.find_first_not_of("+-0123456789/") != std::string::npos)
        throw fail();
    try {
        auto slash = text.find('/');
        if (slash == std::string::npos)
            return Rational(BigInt(text));
        BigInt den(text.substr(slash + 1));
        if (den == 0)
            throw fail();
        return Rational(BigInt(text.substr(0, slash)), den);
    } catch (const Error &) {
        throw;
    } catch (const std::exception &) {
        throw fail();
    }
}

inline void require_format(const std::string &verb, const std::string &format, std::set<std::string> allowed) {
    if (!allowed.count(format))
        throw Error(ErrorKind::UnsupportedFormat, "verb '" + verb + "' has no '" + format + "' output");
}

inline std::string dump(const Json &j) { return j.dump(2) + "\n"; }

inline std::string radical_line(const RadicalRational &v, const std::string &format) {
    return format == "json" ? dump(to_json_value(v)) : v.to_string() + "\n";
}

inline LeafNames names_for(const std::string &names, int n) {
    if (names.empty())
        return default_leaf_names(n);
    auto out = split(names);
    if (static_cast<int>(out.size()) != n)
        throw Error(ErrorKind::InvalidParams, "--names needs one name per leaf");
    return out;
}

inline std::string basis_label(const CouplingTree &t, const BasisState &s) {
    std::string out;
    for (int site : t.internal_sites()) {
        if (!out.empty())
            out += " ";
        out += HalfInt::from_twice(s[site]).to_string();
    }
    return out;
}

/// Totals reachable by coupling `spins` in order, doubled.
inline std::vector<int> reachable_totals(const std::vector<int> &twice) {
    std::set<int> cur{twice.front()};
    for (std::size_t i = 1; i < twice.size(); ++i) {
        std::set<int> next;
        for (int a : cur)
            for (int c = std::abs(a - twice[i]); c <= a + twice[i]; c += 2)
                next.insert(c);
        cur = std::move(next);
    }
    return {cur.begin(), cur.end()};
}

} // namespace detail

inline const char *kFormatsHelp = R"help(Output formats (--format):
  exact  exact values as "p/q" or "p/q*sqrt(r)", plain text
  json   machine-readable JSON; exact values carry coeff_num, coeff_den,
         radicand_num, radicand_den and a float rendering
  csv    comma-separated rows (graph edges, recoupling entries, scans,
         Hahn transforms, Hamiltonian eigenvectors)
  dot    Graphviz text (graph only)

Environment:
  SPINNET_CACHE_MAX_TWICE  largest doubled spin kept in the 6j cache

Exit status: 0 success, 1 domain error ("Kind: message" on stderr), 2 usage error.)help";

inline int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    if (const char *env = std::getenv("SPINNET_CACHE_MAX_TWICE")) {
        char *end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (*env == '\0' || *end != '\0' || v < 0 || v > 100000) {
            err << "usage error: SPINNET_CACHE_MAX_TWICE must be an integer in 0..100000\n";
            return kUsageError;
        }
        config().max_cached_twice = static_cast<int>(v);
    }

    CLI::App app{"Exact angular-momentum recoupling, spin networks and their asymptotics", "spinnet"};
    app.footer(kFormatsHelp);
    app.require_subcommand(1, 1);

    std::string format, spins, proj, from_tree, to_tree, names, total, kind = "pentagon", lengths, potential = "zero",
                                                                       potential_file, alpha = "0", beta = "0";
    int n = 4, N = 8, degree = -1, point = -1, k_from = 1, k_to = 10, window = 5, workers = 1, random_trials = 0;
    std::uint64_t seed = 1;
    bool shifted = false, vectors = false;

    auto add_format = [&](CLI::App *sub, const std::string &def) {
        sub->add_option("--format", format, "output format")->check(CLI::IsMember({"exact", "json", "csv", "dot"}));
        sub->callback([&format, def] {
            if (format.empty())
                format = def;
        });
    };

    auto *threej = app.add_subcommand("threej", "Wigner 3j symbol");
    threej->add_option("--spins", spins, "j1,j2,j3")->required();
    threej->add_option("--proj", proj, "m1,m2,m3")->required();
    add_format(threej, "exact");

    auto *sixj = app.add_subcommand("sixj", "Wigner 6j symbol");
    sixj->add_option("--spins", spins, "j1,...,j6 as {j1 j2 j3; j4 j5 j6}")->required();
    add_format(sixj, "exact");

    auto *ninej = app.add_subcommand("ninej", "Wigner 9j symbol");
    ninej->add_option("--spins", spins, "nine spins, row-major")->required();
    add_format(ninej, "exact");

    auto *graph = app.add_subcommand("graph", "Recoupling graph on n leaves");
    graph->add_option("--n", n, "leaf count (2..7)")->required();
    add_format(graph, "exact");

    auto *recouple = app.add_subcommand("recouple", "Recoupling matrix between two coupling trees");
    recouple->add_option("--from", from_tree, "source tree, e.g. ((1,2),3)")->required();
    recouple->add_option("--to", to_tree, "target tree")->required();
    recouple->add_option("--spins", spins, "leaf spins in leaf-name order")->required();
    recouple->add_option("--J", total, "total angular momentum")->required();
    recouple->add_option("--names", names, "comma-separated leaf names (default 1..n)");
    add_format(recouple, "exact");

    auto *cycle = app.add_subcommand("cycle", "Check a closed recoupling cycle (pentagon on 4 leaves, hexagon on 3)");
    cycle->add_option("--kind", kind, "pentagon or hexagon")->check(CLI::IsMember({"pentagon", "hexagon"}));
    cycle->add_option("--spins", spins, "leaf spins");
    cycle->add_option("--J", total, "total angular momentum");
    cycle->add_option("--random", random_trials, "number of random admissible labelings (spins <= 7/2)");
    cycle->add_option("--seed", seed, "seed for --random");
    add_format(cycle, "exact");

    auto *volume = app.add_subcommand("volume", "Tetrahedron volume and regime");
    auto *vol_len = volume->add_option("--lengths", lengths, "six edge lengths in 6j order");
    auto *vol_spins = volume->add_option("--spins", spins, "six spins in 6j order");
    vol_len->excludes(vol_spins);
    volume->add_flag("--shift", shifted, "use j + 1/2 as edge lengths");
    add_format(volume, "exact");

    auto *asym = app.add_subcommand("asym", "Exact 6j against its semiclassical approximations");
    asym->add_option("--spins", spins, "six spins")->required();
    add_format(asym, "exact");

    auto *scan = app.add_subcommand("scan", "Scale family k*j against the Ponzano-Regge amplitude");
    scan->add_option("--spins", spins, "base spins")->required();
    scan->add_option("--from", k_from, "first scale");
    scan->add_option("--to", k_to, "last scale");
    scan->add_option("--window", window, "window for the running mean square");
    scan->add_option("--workers", workers, "worker threads (0: all cores)");
    add_format(scan, "csv");

    auto *hahn = app.add_subcommand("hahn", "Hahn polynomial or the orthonormal grid transform");
    hahn->add_option("--N", N, "grid size")->required();
    hahn->add_option("--alpha", alpha, "alpha > -1, rational");
    hahn->add_option("--beta", beta, "beta > -1, rational");
    hahn->add_option("--degree", degree, "evaluate Q_degree(x) only");
    hahn->add_option("--x", point, "grid point for --degree");
    add_format(hahn, "exact");

    auto *ham = app.add_subcommand("ham", "Grid Hamiltonian eigenvalues");
    ham->add_option("--N", N, "grid size")->required();
    ham->add_option("--alpha", alpha, "alpha > -1, rational");
    ham->add_option("--beta", beta, "beta > -1, rational");
    auto *pot = ham->add_option("--potential", potential, "built-in: zero or harmonic:c");
    ham->add_option("--potential-file", potential_file, "CSV of index,value samples")->excludes(pot);
    ham->add_flag("--vectors", vectors, "emit eigenvectors as CSV");
    add_format(ham, "json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp &e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError &e) {
        err << "usage error: " << e.what() << "\n";
        return kUsageError;
    }

    try {
        std::string text;
        if (*threej) {
            detail::require_format("threej", format, {"exact", "json"});
            auto j = detail::parse_spins(spins, 3, "--spins");
            auto m = detail::parse_spins(proj, 3, "--proj");
            text = detail::radical_line(wigner_3j(j[0], j[1], j[2], m[0], m[1], m[2]), format);
        } else if (*sixj) {
            detail::require_format("sixj", format, {"exact", "json"});
            auto j = detail::six(spins);
            text = detail::radical_line(wigner_6j(j[0], j[1], j[2], j[3], j[4], j[5]), format);
        } else if (*ninej) {
            detail::require_format("ninej", format, {"exact", "json"});
            auto j = detail::parse_spins(spins, 9, "--spins");
            NineJ rows{{{j[0], j[1], j[2]}, {j[3], j[4], j[5]}, {j[6], j[7], j[8]}}};
            text = detail::radical_line(wigner_9j(rows), format);
        } else if (*graph) {
            auto g = graph_for(n);
            if (format == "dot") {
                text = to_dot(*g);
            } else if (format == "json") {
                Json vertices = Json::array(), edges = Json::array();
                for (std::size_t i = 0; i < g->vertex_count(); ++i)
                    vertices.push_back(g->encoding(static_cast<int>(i)));
                for (const auto &e : g->edges())
                    edges.push_back(Json{{"from", e.from}, {"to", e.to}, {"move", e.move.to_string()}});
                text = detail::dump(Json{{"n", n}, {"vertices", vertices}, {"edges", edges}});
            } else if (format == "csv") {
                text = "from,to,move\n";
                for (const auto &e : g->edges())
                    text += g->encoding(e.from) + "," + g->encoding(e.to) + "," + e.move.to_string() + "\n";
            } else {
                text = std::to_string(g->vertex_count()) + " vertices, " + std::to_string(g->edges().size()) +
                       " edges\n";
                for (std::size_t i = 0; i < g->vertex_count(); ++i)
                    text += g->encoding(static_cast<int>(i)) + "\n";
            }
        } else if (*recouple) {
            detail::require_format("recouple", format, {"exact", "json", "csv"});
            auto leaf = detail::parse_spins(spins, 0, "--spins");
            auto leaf_names = detail::names_for(names, static_cast<int>(leaf.size()));
            auto a = CouplingTree::parse(from_tree, leaf_names);
            auto b = CouplingTree::parse(to_tree, leaf_names);
            auto m = recoupling_matrix(a, b, leaf, HalfInt::parse(total));
            if (format == "json") {
                text = detail::dump(m.to_json(leaf_names));
            } else if (format == "csv") {
                text = "row,col,value\n";
                for (std::size_t i = 0; i < m.rows(); ++i)
                    for (std::size_t k = 0; k < m.cols(); ++k)
                        text += detail::basis_label(m.row_tree(), m.row_basis()[i]) + "," +
                                detail::basis_label(m.col_tree(), m.col_basis()[k]) + "," + m.at(i, k).to_string() +
                                "\n";
            } else {
                text = "# rows " + a.encode(leaf_names) + ", columns " + b.encode(leaf_names) + "\n";
                for (std::size_t i = 0; i < m.rows(); ++i)
                    for (std::size_t k = 0; k < m.cols(); ++k)
                        text += "[" + detail::basis_label(m.row_tree(), m.row_basis()[i]) + "] [" +
                                detail::basis_label(m.col_tree(), m.col_basis()[k]) + "] " + m.at(i, k).to_string() +
                                "\n";
            }
        } else if (*cycle) {
            detail::require_format("cycle", format, {"exact", "json"});
            const int leaves = kind == "pentagon" ? 4 : 3;
            const CouplingTree start = CouplingTree::left_comb(leaves);
            auto g = graph_for(leaves);
            auto moves = kind == "pentagon" ? pentagon_cycle(*g, start) : hexagon_cycle(*g, start);
            Json moves_json = Json::array();
            for (const auto &mv : moves)
                moves_json.push_back(mv.to_string());

            std::vector<std::pair<std::vector<HalfInt>, HalfInt>> labelings;
            if (random_trials > 0) {
                if (!spins.empty() || !total.empty())
                    throw CLI::ValidationError("--random excludes --spins and --J");
                std::mt19937_64 rng(seed);
                for (int t = 0; t < random_trials; ++t) {
                    std::vector<int> twice(leaves);
                    for (auto &x : twice)
                        x = static_cast<int>(rng() % 8);
                    auto totals = detail::reachable_totals(twice);
                    int J = totals[rng() % totals.size()];
                    std::vector<HalfInt> js;
                    for (int x : twice)
                        js.push_back(HalfInt::from_twice(x));
                    labelings.emplace_back(js, HalfInt::from_twice(J));
                }
            } else {
                if (spins.empty() || total.empty())
                    throw CLI::ValidationError("cycle needs --spins and --J, or --random");
                labelings.emplace_back(detail::parse_spins(spins, leaves, "--spins"), HalfInt::parse(total));
            }
            int passed = 0;
            Json trials = Json::array();
            for (const auto &[js, J] : labelings) {
                bool ok = verify_cycle(start, moves, js, J);
                passed += ok;
                Json spins_json = Json::array();
                for (HalfInt j : js)
                    spins_json.push_back(j.to_string());
                trials.push_back(Json{{"spins", spins_json}, {"J", J.to_string()}, {"identity", ok}});
            }
            if (format == "json") {
                text = detail::dump(Json{{"kind", kind},
                                         {"start", canonical_encode(start)},
                                         {"moves", moves_json},
                                         {"trials", trials},
                                         {"identity_count", passed}});
            } else {
                std::string walk;
                for (const auto &mv : moves)
                    walk += (walk.empty() ? "" : " ") + mv.to_string();
                text = kind + " from " + canonical_encode(start) + ": " + walk + "\n";
                if (labelings.size() == 1)
                    text += passed ? "identity\n" : "not identity\n";
                else
                    text += std::to_string(passed) + "/" + std::to_string(labelings.size()) + " identity\n";
            }
        } else if (*volume) {
            detail::require_format("volume", format, {"exact", "json"});
            std::optional<Tetrahedron> t;
            if (!lengths.empty()) {
                std::array<double, 6> l{};
                auto parts = detail::split(lengths);
                if (parts.size() != 6)
                    throw Error(ErrorKind::InvalidParams, "--lengths needs 6 values");
                for (int r = 0; r < 6; ++r)
                    l[r] = spinnet::detail::parse_number(parts[r], "in --lengths");
                t = Tetrahedron::from_lengths(l);
            } else if (!spins.empty()) {
                t = Tetrahedron::from_spins(detail::six(spins), shifted);
            } else {
                throw CLI::ValidationError("volume needs --lengths or --spins");
            }
            auto v = cm_volume(*t);
            Rational cm = t->cayley_menger();
            if (format == "json")
                text = detail::dump(Json{{"volume", v.volume}, {"regime", to_string(v.regime)},
                                         {"cayley_menger", cm.str()}});
            else
                text = "volume " + format_double(v.volume) + "\nregime " + to_string(v.regime) + "\ncayley_menger " +
                       cm.str() + "\n";
        } else if (*asym) {
            detail::require_format("asym", format, {"exact", "json"});
            auto j = detail::six(spins);
            RadicalRational exact = wigner_6j(j[0], j[1], j[2], j[3], j[4], j[5]);
            auto pr = ponzano_regge(j);
            double ms = wigner_mean_square(j);
            if (format == "json") {
                Json angles = Json::array();
                for (double a : pr.angles)
                    angles.push_back(a);
                text = detail::dump(Json{{"exact", to_json_value(exact)},
                                         {"pr_amplitude", pr.amplitude},
                                         {"action", pr.action},
                                         {"volume", pr.volume},
                                         {"angles", angles},
                                         {"wigner_ms", ms}});
            } else {
                text = "exact " + exact.to_string() + "\nexact_float " + format_double(exact.to_double()) +
                       "\npr_amplitude " + format_double(pr.amplitude) + "\naction " + format_double(pr.action) +
                       "\nvolume " + format_double(pr.volume) + "\nwigner_ms " + format_double(ms) + "\n";
            }
        } else if (*scan) {
            detail::require_format("scan", format, {"csv", "json"});
            if (k_from < 1 || k_to < k_from)
                throw Error(ErrorKind::InvalidParams, "scales need 1 <= --from <= --to");
            std::vector<int> ks;
            for (int k = k_from; k <= k_to; ++k)
                ks.push_back(k);
            ScanOptions opts;
            opts.window = window;
            opts.workers = workers;
            auto rows = asymptotic_scan(detail::six(spins), ks, opts);
            text = format == "json" ? detail::dump(scan_to_json(rows)) : scan_to_csv(rows);
        } else if (*hahn) {
            HahnParams p{detail::parse_rational(alpha), detail::parse_rational(beta), N};
            if (degree >= 0 || point >= 0) {
                detail::require_format("hahn", format, {"exact", "json"});
                if (degree < 0 || point < 0)
                    throw CLI::ValidationError("--degree and --x go together");
                Rational q = hahn_eval(p, degree, point);
                text = format == "json" ? detail::dump(Json{{"value", q.str()}, {"float", q.convert_to<double>()}})
                                        : q.str() + "\n";
            } else {
                detail::require_format("hahn", format, {"exact", "json", "csv"});
                auto U = stereodirected_transform(p);
                if (format == "json") {
                    Json rows = Json::array();
                    for (const auto &row : U) {
                        Json r = Json::array();
                        for (const auto &v : row)
                            r.push_back(to_json_value(v));
                        rows.push_back(r);
                    }
                    text = detail::dump(Json{{"N", N}, {"alpha", p.alpha.str()}, {"beta", p.beta.str()}, {"U", rows}});
                } else {
                    const char sep = format == "csv" ? ',' : ' ';
                    for (const auto &row : U) {
                        for (std::size_t x = 0; x < row.size(); ++x)
                            text += (x ? std::string(1, sep) : "") + row[x].to_string();
                        text += "\n";
                    }
                }
            }
        } else if (*ham) {
            HahnParams p{detail::parse_rational(alpha), detail::parse_rational(beta), N};
            spinnet::detail::check_hahn(p);
            std::vector<double> v;
            if (!potential_file.empty()) {
                std::ifstream in(potential_file);
                if (!in)
                    throw Error(ErrorKind::UnsupportedFormat, "cannot open potential file '" + potential_file + "'");
                v = parse_potential_csv(in, N);
            } else {
                v = builtin_potential(potential, N);
            }
            auto sol = build_and_solve(p, v);
            if (vectors || format == "csv") {
                detail::require_format("ham", format, {"csv", "json"});
                text = eigenvectors_to_csv(sol);
            } else {
                detail::require_format("ham", format, {"json"});
                text = detail::dump(solution_to_json(sol));
            }
        }
        out << text;
        return kOk;
    } catch (const CLI::ValidationError &e) {
        err << "usage error: " << e.what() << "\n";
        return kUsageError;
    } catch (const Error &e) {
        err << e.what() << "\n"; // already "Kind: message"
        return kDomainError;
    }
}

} // namespace spinnet::cli
