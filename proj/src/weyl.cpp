#include "tlweyl/weyl.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <stdexcept>

namespace tlweyl {

int word_norm(const SignWord &w) {
    int s = 0;
    for (char c : w) {
        if (c == '+')
            s += 1;
        else if (c == '-')
            s -= 1;
        else
            throw std::invalid_argument("sign word may contain only '+'/'-'");
    }
    return s;
}

int tile_arity_in(TileKind k) { return (int)tile_word_in(k).size(); }
int tile_arity_out(TileKind k) { return (int)tile_word_out(k).size(); }

SignWord tile_word_in(TileKind k) {
    switch (k) {
    case TileKind::id_up: return "+";
    case TileKind::id_down: return "-";
    case TileKind::cup_right: return "";
    case TileKind::cap_right: return "-+";
    case TileKind::cup_left: return "";
    case TileKind::cap_left: return "+-";
    case TileKind::cupcap_up: return "++";
    case TileKind::cupcap_down: return "--";
    case TileKind::box:
    case TileKind::bubble:
    case TileKind::box_dagger: return "";
    }
    return "";
}

SignWord tile_word_out(TileKind k) {
    switch (k) {
    case TileKind::id_up: return "+";
    case TileKind::id_down: return "-";
    case TileKind::cup_right: return "-+";
    case TileKind::cap_right: return "";
    case TileKind::cup_left: return "+-";
    case TileKind::cap_left: return "";
    case TileKind::cupcap_up: return "++";
    case TileKind::cupcap_down: return "--";
    case TileKind::box:
    case TileKind::bubble:
    case TileKind::box_dagger: return "";
    }
    return "";
}

const char *tile_kind_name(TileKind k) {
    switch (k) {
    case TileKind::id_up: return "id_up";
    case TileKind::id_down: return "id_down";
    case TileKind::cup_right: return "cup_right";
    case TileKind::cap_right: return "cap_right";
    case TileKind::cup_left: return "cup_left";
    case TileKind::cap_left: return "cap_left";
    case TileKind::cupcap_up: return "cupcap_up";
    case TileKind::cupcap_down: return "cupcap_down";
    case TileKind::box: return "box";
    case TileKind::bubble: return "bubble";
    case TileKind::box_dagger: return "box_dagger";
    }
    return "?";
}

bool tile_kind_from_name(const std::string &s, TileKind &out) {
    static const std::map<std::string, TileKind> table = {
        {"id_up", TileKind::id_up},
        {"id_down", TileKind::id_down},
        {"cup_right", TileKind::cup_right},
        {"cap_right", TileKind::cap_right},
        {"cup_left", TileKind::cup_left},
        {"cap_left", TileKind::cap_left},
        {"cupcap_up", TileKind::cupcap_up},
        {"cupcap_down", TileKind::cupcap_down},
        {"box", TileKind::box},
        {"bubble", TileKind::bubble},
        {"box_dagger", TileKind::box_dagger},
    };
    auto it = table.find(s);
    if (it == table.end())
        return false;
    out = it->second;
    return true;
}

namespace {
bool is_region_tile(TileKind k) {
    return k == TileKind::box || k == TileKind::bubble || k == TileKind::box_dagger;
}
} // namespace

SignWord apply_slice(const SignWord &w, const std::vector<Tile> &slice) {
    const int L = (int)w.size();
    // Sort a copy so we can process right-to-left (smallest depth first)
    // and splice deterministically.  Interval occupancy is checked against
    // the *source* word, so overlapping strand tiles are rejected.
    std::vector<Tile> tiles = slice;
    std::stable_sort(tiles.begin(), tiles.end(), [](const Tile &a, const Tile &b) {
        return a.pos < b.pos;
    });
    // occupancy over source characters (counted by depth)
    std::vector<bool> used(L, false);
    for (const Tile &t : tiles) {
        if (t.pos < 0)
            throw std::invalid_argument("tile position must be nonnegative");
        int ain = tile_arity_in(t.kind);
        if (ain == 0) {
            if (is_region_tile(t.kind)) {
                if (t.pos > L)
                    throw std::invalid_argument("region tile depth out of range");
            } else if (t.pos > L) {
                throw std::invalid_argument("cup insertion depth out of range");
            }
            continue;
        }
        // strand tile consuming characters at depths pos .. pos+ain-1
        if (t.pos + ain > L)
            throw std::invalid_argument("strand tile reaches past the left edge");
        SignWord want = tile_word_in(t.kind);
        for (int a = 0; a < ain; ++a) {
            int depth = t.pos + a;
            int idx = L - 1 - depth; // character index from the left
            if (used[idx])
                throw std::invalid_argument("overlapping tiles in one slice");
            used[idx] = true;
            // want is written left-to-right; its last char is depth t.pos
            char expect = want[ain - 1 - a];
            if (w[idx] != expect)
                throw std::invalid_argument(
                    std::string("tile ") + tile_kind_name(t.kind) +
                    " does not match word orientation");
        }
    }
    // Build the output word.  Walk depths 0..L, splicing outputs.
    // Map: for each source depth, whether consumed; cup outputs inserted at
    // their insertion depth, processed innermost-first.
    std::string out; // built right-to-left, reversed at the end
    auto emit_outputs_at = [&](int depth) {
        for (const Tile &t : tiles) {
            if (tile_arity_in(t.kind) == 0 && !is_region_tile(t.kind) && t.pos == depth) {
                SignWord o = tile_word_out(t.kind);
                for (auto it = o.rbegin(); it != o.rend(); ++it)
                    out.push_back(*it);
            }
        }
    };
    for (int depth = 0; depth < L; ++depth) {
        emit_outputs_at(depth);
        int idx = L - 1 - depth;
        if (!used[idx]) {
            out.push_back(w[idx]);
            continue;
        }
        // consumed: if this is the tile's rightmost char, emit its output
        for (const Tile &t : tiles) {
            int ain = tile_arity_in(t.kind);
            if (ain > 0 && t.pos == depth) {
                SignWord o = tile_word_out(t.kind);
                for (auto it = o.rbegin(); it != o.rend(); ++it)
                    out.push_back(*it);
            }
        }
    }
    emit_outputs_at(L);
    std::reverse(out.begin(), out.end());
    return out;
}

WeylDiagram identity_diagram(const SignWord &w) {
    WeylDiagram d;
    d.source = w;
    d.target = w;
    return d;
}

WeylDiagram make_diagram(const SignWord &source,
                         const std::vector<std::vector<Tile>> &slices) {
    WeylDiagram d;
    d.source = source;
    d.slices = slices;
    SignWord w = source;
    word_norm(w); // validates the alphabet
    for (const auto &s : slices)
        w = apply_slice(w, s);
    d.target = w;
    return d;
}

std::vector<std::string> validate(const WeylDiagram &d) {
    std::vector<std::string> errs;
    try {
        WeylDiagram r = make_diagram(d.source, d.slices);
        if (r.target != d.target)
            errs.push_back("declared target '" + d.target + "' differs from computed '" +
                           r.target + "'");
    } catch (const std::exception &e) {
        errs.push_back(e.what());
    }
    return errs;
}

RegionLabeling region_labels(const WeylDiagram &d, int n) {
    RegionLabeling rl;
    rl.base = n;
    SignWord w = d.source;
    auto labels_of = [&](const SignWord &word) {
        std::vector<int> out;
        int lvl = n;
        out.push_back(lvl);
        for (auto it = word.rbegin(); it != word.rend(); ++it) {
            lvl += (*it == '+') ? 1 : -1;
            out.push_back(lvl);
        }
        return out;
    };
    rl.boundary_labels.push_back(labels_of(w));
    for (const auto &s : d.slices) {
        w = apply_slice(w, s);
        rl.boundary_labels.push_back(labels_of(w));
    }
    return rl;
}

GateReport gate_check(const WeylDiagram &d, int n) {
    GateReport rep;
    auto errs = validate(d);
    if (!errs.empty()) {
        rep.status = GateStatus::invalid;
        rep.reason = errs.front();
        return rep;
    }
    SignWord w = d.source;
    size_t si = 0;
    auto check_word = [&](const SignWord &word) -> bool {
        int lvl = n;
        for (auto it = word.rbegin(); it != word.rend(); ++it) {
            lvl += (*it == '+') ? 1 : -1;
            if (lvl < 0)
                return false;
        }
        return true;
    };
    auto region_label_at = [&](const SignWord &word, int depth) {
        int lvl = n;
        int cnt = 0;
        for (auto it = word.rbegin(); it != word.rend() && cnt < depth; ++it, ++cnt)
            lvl += (*it == '+') ? 1 : -1;
        return lvl;
    };
    if (!check_word(w)) {
        rep.status = GateStatus::zero;
        rep.reason = "source word dips below level 0";
        return rep;
    }
    for (; si < d.slices.size(); ++si) {
        for (const Tile &t : d.slices[si]) {
            if (t.kind == TileKind::bubble) {
                int np = region_label_at(w, t.pos);
                if (t.k < 0 || np - 2 * t.k < 0) {
                    rep.status = GateStatus::zero;
                    rep.reason = "bubble(" + std::to_string(t.k) + ") in region labeled " +
                                 std::to_string(np) + " vanishes";
                    return rep;
                }
            } else if (t.kind == TileKind::box || t.kind == TileKind::box_dagger) {
                int np = region_label_at(w, t.pos);
                int kk = (t.kind == TileKind::box) ? t.k : t.k - 1;
                // box(k): scalar [n'+k+1]/[n'+k+2]; the dagger of box(k)
                // involves box(k-1).
                if (np + kk + 2 <= 0) {
                    rep.status = GateStatus::invalid;
                    rep.reason = "box label " + std::to_string(kk) + " in region labeled " +
                                 std::to_string(np) + " is inadmissible";
                    return rep;
                }
            }
        }
        w = apply_slice(w, d.slices[si]);
        if (!check_word(w)) {
            rep.status = GateStatus::zero;
            rep.reason = "word after slice " + std::to_string(si) + " dips below level 0";
            return rep;
        }
    }
    return rep;
}

FormalDiagram formal(const WeylDiagram &d, const RatFun &c) {
    FormalDiagram f;
    f.source = d.source;
    f.target = d.target;
    if (!c.is_zero())
        f.terms.push_back({c, d});
    return f;
}

FormalDiagram formal_sum(const std::vector<std::pair<RatFun, WeylDiagram>> &terms) {
    FormalDiagram f;
    if (terms.empty())
        return f;
    f.source = terms.front().second.source;
    f.target = terms.front().second.target;
    for (const auto &t : terms) {
        if (t.second.source != f.source || t.second.target != f.target)
            throw std::invalid_argument("formal sum of diagrams with mismatched boundary");
        if (!t.first.is_zero())
            f.terms.push_back(t);
    }
    return f;
}

namespace {

// Replace the tile at (slice si, index ti) of d by the given sub-slices
// (already positioned at the tile's depth), producing one diagram.
WeylDiagram splice_tile(const WeylDiagram &d, size_t si, size_t ti,
                        const std::vector<std::vector<Tile>> &replacement) {
    std::vector<std::vector<Tile>> slices;
    for (size_t s = 0; s < d.slices.size(); ++s) {
        if (s != si) {
            slices.push_back(d.slices[s]);
            continue;
        }
        std::vector<Tile> rest;
        for (size_t t = 0; t < d.slices[s].size(); ++t)
            if (t != ti)
                rest.push_back(d.slices[s][t]);
        if (!rest.empty())
            slices.push_back(rest);
        for (const auto &r : replacement)
            slices.push_back(r);
    }
    return make_diagram(d.source, slices);
}

// Expansion of bubble(k) at depth p into solid tiles, as a list of
// (coefficient-tiles...) slice-lists.  Valid only where the bubble's region
// label makes all boxes admissible; gate_check decides that downstream.
//
// bubble(0) at p: via the strand-closure definition,
//   box(0) * [closure of (id - [2] * zigzag-cupcap)]
// which is box(0)*(circle) - [2]*box(0)*(closure of the cupcap zigzag).
// bubble(k+1) at p: via the oriented-circle recursion,
//   box(-2k-2) * (circle around bubble(k)) - box(-2k-2)*box(-2k-1)*bubble(k).
std::vector<std::pair<RatFun, std::vector<std::vector<Tile>>>>
bubble_expansion(int k, int p) {
    using Slices = std::vector<std::vector<Tile>>;
    std::vector<std::pair<RatFun, Slices>> out;
    if (k < 0)
        return out; // zero
    if (k == 0) {
        Slices t1 = {
            {Tile{TileKind::box, p, 0}, Tile{TileKind::cup_right, p, 0}},
            {Tile{TileKind::cap_right, p, 0}},
        };
        out.push_back({RatFun::one(), t1});
        Slices t2 = {
            {Tile{TileKind::box, p, 0}, Tile{TileKind::cup_right, p, 0}},
            {Tile{TileKind::cup_left, p, 0}},
            {Tile{TileKind::cupcap_up, p + 1, 0}},
            {Tile{TileKind::cap_left, p, 0}},
            {Tile{TileKind::cap_right, p, 0}},
        };
        out.push_back({-qint(2), t2});
        return out;
    }
    int kk = k - 1; // expand around bubble(kk)
    auto inner = bubble_expansion(kk, p + 1);
    for (const auto &in : inner) {
        Slices s;
        s.push_back({Tile{TileKind::box, p, -2 * kk - 2}, Tile{TileKind::cup_left, p, 0}});
        for (const auto &sl : in.second)
            s.push_back(sl);
        s.push_back({Tile{TileKind::cap_left, p, 0}});
        out.push_back({in.first, s});
    }
    auto flat = bubble_expansion(kk, p);
    for (const auto &in : flat) {
        Slices s;
        s.push_back({Tile{TileKind::box, p, -2 * kk - 2}, Tile{TileKind::box, p, -2 * kk - 1}});
        for (const auto &sl : in.second)
            s.push_back(sl);
        out.push_back({-in.first, s});
    }
    return out;
}

} // namespace

FormalDiagram macro_expand(const WeylDiagram &d) {
    // Find the first macro tile; replace; recurse.
    for (size_t si = 0; si < d.slices.size(); ++si) {
        for (size_t ti = 0; ti < d.slices[si].size(); ++ti) {
            const Tile &t = d.slices[si][ti];
            if (t.kind == TileKind::box_dagger) {
                // [2] - box(k-1)
                WeylDiagram a = splice_tile(d, si, ti, {});
                WeylDiagram b =
                    splice_tile(d, si, ti, {{Tile{TileKind::box, t.pos, t.k - 1}}});
                FormalDiagram fa = macro_expand(a);
                FormalDiagram fb = macro_expand(b);
                FormalDiagram out;
                out.source = d.source;
                out.target = d.target;
                for (auto &tm : fa.terms)
                    out.terms.push_back({tm.first * qint(2), tm.second});
                for (auto &tm : fb.terms)
                    out.terms.push_back({-tm.first, tm.second});
                return out;
            }
            if (t.kind == TileKind::bubble) {
                auto exp = bubble_expansion(t.k, t.pos);
                FormalDiagram out;
                out.source = d.source;
                out.target = d.target;
                for (const auto &e : exp) {
                    WeylDiagram rep = splice_tile(d, si, ti, e.second);
                    FormalDiagram fr = macro_expand(rep);
                    for (auto &tm : fr.terms)
                        out.terms.push_back({e.first * tm.first, tm.second});
                }
                return out;
            }
        }
    }
    return formal(d);
}

FormalDiagram macro_expand(const FormalDiagram &f) {
    FormalDiagram out;
    out.source = f.source;
    out.target = f.target;
    for (const auto &t : f.terms) {
        FormalDiagram e = macro_expand(t.second);
        for (const auto &tt : e.terms)
            out.terms.push_back({t.first * tt.first, tt.second});
    }
    return out;
}

std::string diagram_to_json(const WeylDiagram &d) {
    nlohmann::ordered_json j;
    j["source"] = d.source;
    j["target"] = d.target;
    j["slices"] = nlohmann::ordered_json::array();
    for (const auto &s : d.slices) {
        nlohmann::ordered_json js = nlohmann::ordered_json::array();
        for (const Tile &t : s) {
            nlohmann::ordered_json jt;
            jt["kind"] = tile_kind_name(t.kind);
            jt["pos"] = t.pos;
            if (t.kind == TileKind::box || t.kind == TileKind::bubble ||
                t.kind == TileKind::box_dagger)
                jt["k"] = t.k;
            js.push_back(jt);
        }
        j["slices"].push_back(js);
    }
    return j.dump();
}

WeylDiagram diagram_from_json(const std::string &json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    SignWord src = j.at("source").get<std::string>();
    std::vector<std::vector<Tile>> slices;
    for (const auto &js : j.at("slices")) {
        std::vector<Tile> s;
        for (const auto &jt : js) {
            Tile t;
            std::string kind = jt.at("kind").get<std::string>();
            if (!tile_kind_from_name(kind, t.kind))
                throw std::invalid_argument("unknown tile kind '" + kind + "'");
            t.pos = jt.at("pos").get<int>();
            t.k = jt.value("k", 0);
            s.push_back(t);
        }
        slices.push_back(s);
    }
    WeylDiagram d = make_diagram(src, slices);
    if (j.contains("target")) {
        std::string tgt = j.at("target").get<std::string>();
        if (tgt != d.target)
            throw std::invalid_argument("declared target does not match slices");
    }
    return d;
}

} // namespace tlweyl
