#pragma once

// Command-line frontend. run() parses arguments, executes one subcommand and
// returns the report instead of printing it, so tests can drive it directly.
//
// Exit codes: 0 success / verified, 1 verification failed, 2 input error.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "zbrng/error.hpp"
#include "zbrng/generators.hpp"
#include "zbrng/hadamard.hpp"
#include "zbrng/io.hpp"
#include "zbrng/quotients.hpp"
#include "zbrng/rng_core.hpp"
#include "zbrng/spectra.hpp"

namespace zbrng::cli {

using Json = nlohmann::ordered_json;

struct CommandResult {
    int exit_code = 0;
    std::string report;
    std::vector<std::string> files; // paths written
};

namespace detail {

inline std::string scalar_text(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

inline bool is_flat(const Json& v) {
    return std::none_of(v.begin(), v.end(), [](const Json& x) { return x.is_structured(); });
}

/// "key: value" per top-level field; flat arrays on one line, nested arrays one
/// element per line.
inline std::string render_human(const Json& j) {
    std::ostringstream out;
    for (const auto& [key, v] : j.items()) {
        if (key == "output") continue;
        out << key << ':';
        if (!v.is_structured()) {
            out << ' ' << scalar_text(v) << '\n';
        } else if (v.is_array() && is_flat(v)) {
            for (const auto& x : v) out << ' ' << scalar_text(x);
            out << '\n';
        } else if (v.is_object() && is_flat(v)) {
            for (const auto& [k2, x] : v.items()) out << ' ' << k2 << '=' << scalar_text(x);
            out << '\n';
        } else {
            out << '\n';
            for (const auto& x : v) {
                out << "  ";
                if (x.is_array() && is_flat(x)) {
                    for (std::size_t t = 0; t < x.size(); ++t) out << (t ? " " : "") << scalar_text(x[t]);
                } else {
                    out << x.dump();
                }
                out << '\n';
            }
        }
    }
    if (j.contains("output")) out << j["output"].get<std::string>();
    return out.str();
}

inline Json census_json(const std::map<AbsMultiset, std::size_t>& census) {
    Json arr = Json::array();
    for (const auto& [ms, count] : census) {
        Json m = Json::object();
        for (const auto& [v, mult] : ms) m[std::to_string(v)] = mult;
        arr.push_back(Json{{"multiset", m}, {"pairs", count}});
    }
    return arr;
}

enum class FileKind { ring, smatrix, hadamard };

inline FileKind sniff(const std::string& text) {
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok == "zbrng") return FileKind::ring;
        if (tok == "smatrix") return FileKind::smatrix;
        return FileKind::hadamard;
    }
    throw InputError("empty input file");
}

} // namespace detail

/// Runs one command. `args` excludes the program name.
inline CommandResult run(const std::vector<std::string>& args) {
    CLI::App app{"Tools for Z-based rngs, s-matrices and Hadamard matrices", "zbrng"};
    app.require_subcommand(1);
    app.fallthrough();

    double tol = 1e-8;
    std::size_t cap = 4096;
    bool machine = false;
    long long seed = 0;
    std::string out_path;
    app.add_option("--tol", tol, "numeric kernel tolerance")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--cap", cap, "semigroup size cap for lift")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_flag("--machine", machine, "print the report as JSON");
    app.add_option("--seed", seed, "reserved; all paths are deterministic");
    app.add_option("-o,--output", out_path, "write the produced matrix or tensor to this file");

    Json j = Json::object();
    CommandResult result;
    // Produced file content goes to -o when given, otherwise into the report.
    auto emit = [&](const std::string& content) {
        if (out_path.empty()) {
            j["output"] = content;
            return;
        }
        write_file(out_path, content);
        result.files.push_back(out_path);
        j["written"] = out_path;
    };
    auto tolerances = [&] {
        Tolerances t;
        t.kernel = tol;
        return t;
    };

    std::vector<std::pair<CLI::App*, std::function<int()>>> handlers;
    auto command = [&](CLI::App& parent, const std::string& name, const std::string& help) {
        CLI::App* sub = parent.add_subcommand(name, help);
        sub->fallthrough();
        return sub;
    };

    // ---- rings --------------------------------------------------------------
    std::string file, file2;
    bool search_involution = false;
    auto* verify = command(app, "verify", "check the rng axioms of a ring file");
    verify->add_option("file", file)->required();
    verify->add_flag("--search-involution", search_involution, "try every involutive permutation (n <= 12)");
    handlers.emplace_back(verify, [&] {
        const AlgebraFile f = parse_algebra(read_file(file));
        const StructureTensor N = to_tensor(f);
        if (search_involution) {
            const auto found = admissible_involutions(N);
            j["n"] = N.size();
            j["admissible_involutions"] = found.size();
            Json list = Json::array();
            for (const auto& p : found) list.push_back(p);
            j["involutions"] = list;
            return found.empty() ? 1 : 0;
        }
        if (!f.involution) throw InputError("ring file has no involution line (use --search-involution)");
        const FusionRing R(N, *f.involution);
        const VerifyReport rep = verify_axioms(R);
        j["n"] = R.size();
        for (const auto& c : rep.checks) {
            std::string line = c.passed ? "pass" : "FAIL";
            if (!c.passed) {
                if (!c.witness.empty()) {
                    line += " at";
                    for (Index w : c.witness) line += " " + std::to_string(w);
                }
                if (!c.detail.empty()) line += " (" + c.detail + ")";
            }
            j[c.name] = line;
        }
        j["verified"] = rep.all_passed();
        return rep.all_passed() ? 0 : 1;
    });

    auto* identity = command(app, "identity", "identity coefficients e_i of a ring file");
    identity->add_option("file", file)->required();
    handlers.emplace_back(identity, [&] {
        FusionRing R = parse_ring(read_file(file));
        Json e = Json::array();
        for (const auto& c : identity_coefficients(R)) e.push_back(format_cyc(c));
        j["identity"] = e;
        return 0;
    });

    auto* smatrix = command(app, "smatrix", "s-matrix of a ring file");
    smatrix->add_option("file", file)->required();
    handlers.emplace_back(smatrix, [&] {
        const FusionRing R = parse_ring(read_file(file));
        for (const AxiomCheck& c : {zbrng::detail::check_commutativity(R.tensor()), zbrng::detail::check_associativity(R.tensor())})
            if (!c.passed) {
                j["error"] = c.name + " fails";
                j["witness"] = c.witness;
                return 1;
            }
        const SMatrix s = smatrix_from_tensor(R, tolerances());
        const auto orth = row_orthogonality_check(s, R.tilde());
        j["mode"] = s.is_exact() ? "exact" : "numeric";
        j["rows_orthogonal"] = orth.orthogonal;
        j["residual"] = character_residual(s, R.tensor());
        emit(format_smatrix(s));
        return 0;
    });

    auto* verlinde = command(app, "verlinde", "structure constants of an s-matrix file");
    verlinde->add_option("file", file)->required();
    handlers.emplace_back(verlinde, [&] {
        const SMatrix s = parse_smatrix(read_file(file));
        const VerlindeResult v = verlinde_tensor(s, tolerances());
        std::optional<Permutation> tilde;
        try {
            tilde = involution_from_smatrix(s);
        } catch (const AlgebraError& e) {
            j["involution"] = std::string("none: ") + e.what();
        }
        if (tilde) j["involution"] = *tilde;
        j["integral"] = v.integral;
        j["nonnegative"] = v.nonnegative;
        if (s.is_exact() || s.rows() <= 64) {
            const auto orth = hermitian_orthogonality(s);
            j["rows_orthogonal"] = orth.orthogonal;
            if (orth.witness) j["nonorthogonal_rows"] = {orth.witness->first, orth.witness->second};
        }
        emit(format_tensor(v.tensor, tilde));
        return v.integral ? 0 : 1;
    });

    auto load_smatrix = [&](const std::string& path) {
        const std::string text = read_file(path);
        if (detail::sniff(text) == detail::FileKind::ring) return smatrix_from_tensor(parse_ring(text), tolerances());
        return parse_smatrix(text);
    };

    auto* closed = command(app, "closed", "closed subsets by the row-pair heuristic");
    closed->add_option("file", file, "s-matrix or ring file")->required();
    handlers.emplace_back(closed, [&] {
        const ClosedSubsetResult r = closed_subset_heuristic(load_smatrix(file), tolerances());
        Json sets = Json::array();
        for (const auto& s : r.sets) sets.push_back(s);
        j["closed_subsets"] = sets;
        j["rejected_candidates"] = r.rejected;
        return 0;
    });

    std::vector<std::size_t> indices;
    auto* subring = command(app, "subring", "restrict a ring file to a closed subset");
    subring->add_option("file", file)->required();
    subring->add_option("indices", indices, "basis indices of the subset")->required();
    handlers.emplace_back(subring, [&] {
        const FusionRing R = parse_ring(read_file(file));
        const IndexSet S = normalize_index_set(indices, R.size());
        const FusionRing sub = subring_restrict(R, S);
        j["subset"] = S;
        j["verified"] = verify_axioms(sub).all_passed();
        emit(format_ring(sub));
        return 0;
    });

    std::size_t element = 0;
    auto* quotient2 = command(app, "quotient2", "factor ring by an order-2 basis element");
    quotient2->add_option("file", file)->required();
    quotient2->add_option("d", element, "index of b_d with b_d^2 = 1")->required();
    handlers.emplace_back(quotient2, [&] {
        FusionRing R = parse_ring(read_file(file));
        const Order2Quotient q = order2_quotient(R, element);
        j["representatives"] = q.representatives;
        j["class_of"] = q.class_of;
        j["commutative"] = q.algebra.is_commutative();
        j["associative"] = q.algebra.is_associative();
        j["nonnegative"] = q.algebra.all_nonnegative();
        emit(format_pointed(q.algebra));
        return 0;
    });

    auto* lift = command(app, "lift", "pointed algebra with nonnegative constants covering the ring");
    lift->add_option("file", file, "exact s-matrix or ring file")->required();
    handlers.emplace_back(lift, [&] {
        const std::string text = read_file(file);
        const bool from_ring = detail::sniff(text) == detail::FileKind::ring;
        const SMatrix s = from_ring ? smatrix_from_tensor(parse_ring(text), tolerances()) : parse_smatrix(text);
        const LiftPresentation L = fannsc_lift(s, cap);
        const FusionRing R = from_ring ? parse_ring(text) : ring_from_smatrix(s, tolerances());
        const bool ok = quotient_verify(L, R);
        j["semigroup_size"] = L.lifted.size();
        j["relaxation_passes"] = L.relaxation_passes;
        j["iteration_cap_hit"] = L.iteration_cap_hit;
        j["nonnegative"] = L.lifted.all_nonnegative();
        j["quotient_verified"] = ok;
        emit(format_lift(L));
        return ok && !L.iteration_cap_hit ? 0 : 1;
    });

    // ---- Hadamard -----------------------------------------------------------
    auto* had = command(app, "had", "Hadamard matrix tools");
    had->require_subcommand(1);
    auto load_had = [&](const std::string& path) { return parse_hadamard(read_file(path)); };

    bool check_parity = false;
    auto* had_ring = command(*had, "ring", "associated ring of a Hadamard matrix");
    had_ring->add_option("file", file)->required();
    had_ring->add_flag("--check-parity", check_parity, "odd-k parity and Klein-subring checks");
    handlers.emplace_back(had_ring, [&] {
        const HadamardMatrix h = load_had(file);
        FusionRing R = ring_from_hadamard(h);
        const auto k = static_cast<std::int64_t>(h.k());
        const bool axioms = verify_axioms(R).all_passed();
        bool ok = axioms && xi_tensor_agreement(h, R.tensor());
        j["n"] = h.order();
        j["k"] = k;
        j["axioms"] = axioms;
        j["xi_agreement"] = xi_tensor_agreement(h, R.tensor());
        if (check_parity) {
            if (k % 2 == 1 && k >= 3) {
                const bool parity = odd_k_parity_holds(R.tensor(), k);
                const bool klein = no_klein_subring(R.tensor(), k);
                j["parity"] = parity;
                j["no_klein_subring"] = klein;
                ok = ok && parity && klein;
            } else {
                j["parity"] = "not applicable (needs odd k >= 3)";
            }
        }
        emit(format_ring(R));
        return ok ? 0 : 1;
    });

    auto* had_profile = command(*had, "profile", "profile over 4-subsets of columns");
    had_profile->add_option("file", file)->required();
    handlers.emplace_back(had_profile, [&] {
        const HadamardMatrix h = load_had(file);
        Json p = Json::object();
        std::uint64_t total = 0;
        for (const auto& [v, count] : profile(h)) {
            p[std::to_string(v)] = count;
            total += count;
        }
        j["n"] = h.order();
        j["profile"] = p;
        j["subsets"] = total;
        return 0;
    });

    auto* had_census = command(*had, "census", "multisets of |N_ij^m| over pairs");
    had_census->add_option("file", file)->required();
    handlers.emplace_back(had_census, [&] {
        const HadamardMatrix h = load_had(file);
        const auto census = multiset_census(ring_from_hadamard(h));
        const auto bound = triangular_bound(static_cast<std::int64_t>(h.k()));
        j["distinct_multisets"] = census.size();
        j["triangular_bound"] = bound;
        j["census"] = detail::census_json(census);
        return census.size() <= bound ? 0 : 1;
    });

    auto* had_closed = command(*had, "closed", "closed subsets of the ring (odd k)");
    had_closed->add_option("file", file)->required();
    handlers.emplace_back(had_closed, [&] {
        const auto sets = had_closed_subsets(ring_from_hadamard(load_had(file)));
        Json arr = Json::array();
        for (const auto& s : sets) arr.push_back(s);
        j["closed_subsets"] = arr;
        return 0;
    });

    std::size_t basis_index = 1;
    auto* had_w = command(*had, "wmatrix", "W matrix of a basis element");
    had_w->add_option("file", file)->required();
    had_w->add_option("i", basis_index, "basis index, nonzero")->required();
    handlers.emplace_back(had_w, [&] {
        const IntMatrix w = wmatrix(ring_from_hadamard(load_had(file)), basis_index);
        j["rows"] = w.rows();
        j["cols"] = w.cols();
        std::ostringstream text;
        for (std::size_t r = 0; r < w.rows(); ++r) {
            for (std::size_t c = 0; c < w.cols(); ++c) text << (c ? " " : "") << w(r, c);
            text << '\n';
        }
        emit(text.str());
        return 0;
    });

    auto* had_rec = command(*had, "reconstruct", "Hadamard matrix from a ring file");
    had_rec->add_option("file", file)->required();
    handlers.emplace_back(had_rec, [&] {
        const FusionRing R = parse_ring(read_file(file));
        const HadamardMatrix h = reconstruct_exact(R, ring_k(R));
        const bool ok = hadamard_tensor(h) == R.tensor();
        j["n"] = h.order();
        j["tensor_matches"] = ok;
        emit(format_hadamard(h));
        return ok ? 0 : 1;
    });

    auto* had_rec3 = command(*had, "reconstruct3", "Hadamard matrix mod 3 from a ring file (k = 1 mod 3)");
    had_rec3->add_option("file", file)->required();
    handlers.emplace_back(had_rec3, [&] {
        const FusionRing R = parse_ring(read_file(file));
        const F3Matrix m = reconstruct_mod3(reduce_mod3(R.tensor()), ring_k(R));
        IntMatrix signs(m.rows(), m.cols());
        for (std::size_t r = 0; r < m.rows(); ++r)
            for (std::size_t c = 0; c < m.cols(); ++c) signs(r, c) = m(r, c).centered();
        j["n"] = m.rows();
        emit(format_sign_matrix(signs));
        return 0;
    });

    long long k_value = 3;
    auto* had_f2 = command(*had, "f2", "commutativity and associativity of the F2 algebra");
    had_f2->add_option("k", k_value)->required()->check(CLI::Range(1, 64));
    handlers.emplace_back(had_f2, [&] {
        const bool ok = f2_algebra_check(k_value);
        j["k"] = k_value;
        j["commutative_associative"] = ok;
        return ok ? 0 : 1;
    });

    auto* had_vrank = command(*had, "vrank", "rank of the v-matrix");
    had_vrank->add_option("file", file)->required();
    handlers.emplace_back(had_vrank, [&] {
        j["rank"] = v_rank(load_had(file));
        return 0;
    });

    auto* had_equiv = command(*had, "equiv", "invariant-based inequivalence screen");
    had_equiv->add_option("a", file)->required();
    had_equiv->add_option("b", file2)->required();
    handlers.emplace_back(had_equiv, [&] {
        j["verdict"] = to_string(equiv_screen(load_had(file), load_had(file2)));
        return 0;
    });

    // ---- generators ---------------------------------------------------------
    auto* gen = command(app, "gen", "generate example matrices");
    gen->require_subcommand(1);

    int param = 0;
    auto* gen_syl = command(*gen, "sylvester", "Sylvester matrix of order 2^m");
    gen_syl->add_option("m", param)->required();
    handlers.emplace_back(gen_syl, [&] {
        emit(format_hadamard(gen_sylvester(param)));
        return 0;
    });

    long long prime = 0;
    auto* gen_paley_cmd = command(*gen, "paley", "Paley matrix of order q + 1, q prime, q = 3 mod 4");
    gen_paley_cmd->add_option("q", prime)->required();
    handlers.emplace_back(gen_paley_cmd, [&] {
        emit(format_hadamard(gen_paley(prime)));
        return 0;
    });

    auto* gen_kron = command(*gen, "kronecker", "Kronecker product of two sign-orthogonal matrices");
    gen_kron->add_option("a", file)->required();
    gen_kron->add_option("b", file2)->required();
    handlers.emplace_back(gen_kron, [&] {
        emit(format_hadamard(gen_kronecker(parse_sign_matrix(read_file(file)), parse_sign_matrix(read_file(file2)))));
        return 0;
    });

    std::vector<int> orders;
    bool as_ring = false;
    auto* gen_group = command(*gen, "group", "character table of Z/m1 x ... x Z/mr");
    gen_group->add_option("orders", orders)->required();
    gen_group->add_flag("--ring", as_ring, "write the group ring instead of its table");
    handlers.emplace_back(gen_group, [&] {
        const GroupSpec g(orders);
        emit(as_ring ? format_ring(group_ring(g)) : format_smatrix(group_ring_smatrix(g)));
        return 0;
    });

    auto* gen_ext2 = command(*gen, "ext2", "exterior square of a group character table");
    gen_ext2->add_option("orders", orders)->required();
    handlers.emplace_back(gen_ext2, [&] {
        emit(format_smatrix(exterior_square(group_ring_smatrix(GroupSpec(orders)))));
        return 0;
    });

    auto* gen_kp = command(*gen, "kp", "A1 affine s-matrix at level k (numeric)");
    gen_kp->add_option("level", param)->required();
    handlers.emplace_back(gen_kp, [&] {
        emit(format_smatrix(kac_peterson_a1(param)));
        return 0;
    });

    auto* gen_ds3 = command(*gen, "ds3", "quotient of the D(S3) representation ring");
    handlers.emplace_back(gen_ds3, [&] {
        emit(format_smatrix(fixture_ds3()));
        return 0;
    });

    // ---- dispatch -----------------------------------------------------------
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        return {0, app.help(), {}};
    } catch (const CLI::CallForAllHelp&) {
        return {0, app.help("", CLI::AppFormatMode::All), {}};
    } catch (const CLI::ParseError& e) {
        return {2, std::string("error: ") + e.what() + "\n", {}};
    }

    try {
        for (auto& [sub, handler] : handlers) {
            if (!sub->parsed()) continue;
            j["command"] = sub->get_parent() == &app ? sub->get_name() : sub->get_parent()->get_name() + " " + sub->get_name();
            result.exit_code = handler();
            break;
        }
    } catch (const InputError& e) {
        j["error"] = e.what();
        result.exit_code = 2;
    } catch (const AlgebraError& e) {
        j["error"] = e.what();
        result.exit_code = 1;
    } catch (const Error& e) {
        j["error"] = e.what();
        result.exit_code = 2;
    }
    j["exit"] = result.exit_code;
    result.report = machine ? j.dump(2) + "\n" : detail::render_human(j);
    return result;
}

} // namespace zbrng::cli
