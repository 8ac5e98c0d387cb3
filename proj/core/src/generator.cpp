#include "mawarith/generator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_set>

#include "mawarith/error.hpp"
#include "mawarith/solver.hpp"

namespace mawarith {

namespace {

using enum HeirKind;
using Rng = std::mt19937_64;

constexpr std::array<Category, 3> kCategories{Category::simple, Category::awl, Category::radd};
constexpr std::array<Difficulty, 4> kRegimes{Difficulty::simple, Difficulty::moderate, Difficulty::complex,
                                             Difficulty::very_complex};

bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

template <class T>
T one_of(std::initializer_list<T> options, Rng& rng) {
    return *(options.begin() + uniform(rng, 0, static_cast<int>(options.size()) - 1));
}

// Head count skewed toward one, with a flat tail up to `max`.
int heads(Rng& rng, int max, int at_least = 1) {
    if (max <= at_least || chance(rng, 0.5)) return at_least;
    return uniform(rng, at_least + 1, max);
}

std::pair<int, int> kind_range(Difficulty d) {
    switch (d) {
        case Difficulty::simple: return {1, 2};
        case Difficulty::moderate: return {3, 3};
        case Difficulty::complex: return {4, 5};
        case Difficulty::very_complex: return {6, 8};
    }
    return {1, 2};
}

struct Draft {
    CaseInput in;
    int max_heads;

    bool has(HeirKind k) const { return in.heirs.contains(k); }
    int kinds() const { return static_cast<int>(in.heirs.size()); }

    void add(HeirKind k, Rng& rng, int at_least = 1) {
        if (has(k)) return;
        if (heir_info(k).unique) {
            in.heirs[k] = 1;
        } else if (k == wife) {
            in.heirs[k] = heads(rng, 4);
        } else {
            in.heirs[k] = heads(rng, max_heads, at_least);
        }
    }

    bool fits(HeirKind k) const {
        if (has(k)) return false;
        if (k == husband && has(wife)) return false;
        if (k == wife && has(husband)) return false;
        return true;
    }

    // Pads with kinds from `pool` until `target` kinds are present.
    void pad(std::vector<HeirKind> pool, int target, Rng& rng) {
        std::shuffle(pool.begin(), pool.end(), rng);
        for (HeirKind k : pool) {
            if (kinds() >= target) break;
            if (fits(k)) add(k, rng);
        }
    }
};

std::vector<HeirKind> all_except(std::initializer_list<HeirKind> excluded) {
    std::vector<HeirKind> out;
    for (HeirKind k : all_heir_kinds()) {
        if (std::find(excluded.begin(), excluded.end(), k) == excluded.end()) out.push_back(k);
    }
    return out;
}

// A male residuary anchors the case; female descendants are kept out unless a
// son makes them residuary too, so fixed shares cannot oversubscribe.
void sample_simple(Draft& d, int target, Rng& rng) {
    const double r = std::uniform_real_distribution<double>(0, 1)(rng);
    HeirKind anchor = r < 0.55 ? son : r < 0.70 ? sons_son : r < 0.85 ? full_brother : r < 0.90 ? paternal_brother : father;
    d.add(anchor, rng);
    switch (anchor) {
        case son: d.pad(all_except({}), target, rng); break;
        case sons_son: d.pad(all_except({daughter}), target, rng); break;
        case paternal_brother: d.pad(all_except({daughter, sons_daughter, full_sister}), target, rng); break;
        default: d.pad(all_except({daughter, sons_daughter}), target, rng); break;
    }
}

void sample_awl(Draft& d, int target, Rng& rng) {
    const double r = std::uniform_real_distribution<double>(0, 1)(rng);
    if (r < 0.40) {
        // Husband with sisters plus at least one further sharer.
        const HeirKind sister = chance(rng, 0.7) ? full_sister : paternal_sister;
        d.add(husband, rng);
        d.add(sister, rng);
        if (d.in.count(sister) == 1 || chance(rng, 0.5)) {
            d.add(one_of({mother, maternal_brother, maternal_sister, paternal_grandmother, maternal_grandmother}, rng),
                  rng);
        }
        if (sister == full_sister) {
            d.pad({mother, paternal_grandmother, maternal_grandmother, maternal_brother, maternal_sister, paternal_sister,
                   paternal_brother},
                  target, rng);
        } else {
            d.pad({mother, paternal_grandmother, maternal_grandmother, maternal_brother, maternal_sister}, target, rng);
        }
    } else if (r < 0.85) {
        // Spouse, two or more daughters (or son's daughters) and parents.
        const HeirKind line = chance(rng, 0.8) ? daughter : sons_daughter;
        d.add(line, rng, 2);
        if (chance(rng, 0.5)) {
            d.add(husband, rng);
            d.add(one_of({mother, father, paternal_grandfather, paternal_grandmother, maternal_grandmother}, rng), rng);
        } else {
            d.add(wife, rng);
            d.add(one_of({mother, paternal_grandmother, maternal_grandmother}, rng), rng);
            d.add(one_of({father, paternal_grandfather}, rng), rng);
        }
        std::vector<HeirKind> pool{mother, father, paternal_grandfather, paternal_grandmother, maternal_grandmother,
                                   full_brother, full_sister, paternal_brother, paternal_sister, maternal_brother,
                                   maternal_sister};
        if (line == daughter) pool.push_back(sons_daughter);
        d.pad(pool, target, rng);
    } else {
        // Two or more sisters with two or more maternal siblings and a mother or grandmother.
        d.add(full_sister, rng, 2);
        if (chance(rng, 0.5)) {
            d.add(maternal_brother, rng, 2);
        } else {
            d.add(maternal_brother, rng);
            d.add(maternal_sister, rng);
        }
        d.add(one_of({mother, paternal_grandmother, maternal_grandmother}, rng), rng);
        d.pad({husband, wife, paternal_sister, paternal_brother, maternal_sister, paternal_grandmother,
               maternal_grandmother},
              target, rng);
    }
}

// Sharers only. Padding admits a kind only when the profile blocks it, so
// no residuary can appear.
void sample_radd(Draft& d, int target, Rng& rng, const RuleProfile& profile) {
    const double r = std::uniform_real_distribution<double>(0, 1)(rng);
    if (r < 0.45) {
        const bool granddaughters_only = chance(rng, 0.2);
        d.add(granddaughters_only ? sons_daughter : daughter, rng);
        if (!granddaughters_only && d.in.count(daughter) == 1 && chance(rng, 0.3)) d.add(sons_daughter, rng);
        if (chance(rng, 0.8)) {
            const int pick = uniform(rng, 0, 3);
            if (pick == 0) d.add(mother, rng);
            if (pick == 1 || pick == 3) d.add(paternal_grandmother, rng);
            if (pick == 2 || pick == 3) d.add(maternal_grandmother, rng);
        }
        const bool lone_line = d.in.count(daughter) + d.in.count(sons_daughter) == 1;
        if (lone_line && chance(rng, 0.2)) {
            d.add(husband, rng);
        } else if (chance(rng, 0.4)) {
            d.add(wife, rng);
        }
    } else if (r < 0.75) {
        const HeirKind sister = chance(rng, 0.7) ? full_sister : paternal_sister;
        d.add(sister, rng);
        if (sister == full_sister && d.in.count(full_sister) == 1 && chance(rng, 0.3)) d.add(paternal_sister, rng);
        if (chance(rng, 0.7)) d.add(one_of({mother, paternal_grandmother, maternal_grandmother}, rng), rng);
    } else if (r < 0.90) {
        d.add(one_of({mother, paternal_grandmother, maternal_grandmother}, rng), rng);
        d.add(one_of({maternal_brother, maternal_sister}, rng), rng);
        if (chance(rng, 0.4)) d.add(wife, rng);
    } else {
        d.add(one_of({daughter, sons_daughter, full_sister, paternal_sister, mother, maternal_grandmother,
                      maternal_brother},
                     rng),
              rng);
    }

    std::vector<HeirKind> pool(all_heir_kinds().begin(), all_heir_kinds().end());
    std::shuffle(pool.begin(), pool.end(), rng);
    const std::size_t eligible_before = determine_blocking(d.in, profile).eligible.size();
    for (HeirKind k : pool) {
        if (d.kinds() >= target) break;
        if (!d.fits(k)) continue;
        Draft trial = d;
        trial.add(k, rng);
        const BlockingResult b = determine_blocking(trial.in, profile);
        if (b.eligible.size() == eligible_before && !b.context.has(k)) d = std::move(trial);
    }
}

}  // namespace

std::string_view to_string(Difficulty d) noexcept {
    switch (d) {
        case Difficulty::simple: return "simple";
        case Difficulty::moderate: return "moderate";
        case Difficulty::complex: return "complex";
        case Difficulty::very_complex: return "very-complex";
    }
    return "simple";
}

std::optional<Difficulty> difficulty_from_string(std::string_view s) noexcept {
    for (Difficulty d : kRegimes) {
        if (to_string(d) == s) return d;
    }
    return std::nullopt;
}

double difficulty_score(const SolvedCase& s, const DifficultyWeights& w) {
    const int kinds = static_cast<int>(s.eligible.size() + s.blocked.size());
    const int blocked = static_cast<int>(s.blocked.size());
    double score = w.per_kind * std::min(kinds, w.kind_cap) + w.per_blocked * std::min(blocked, w.blocked_cap);
    if (s.adjustment.kind == AdjustmentKind::awl) score += w.awl;
    if (s.adjustment.kind == AdjustmentKind::radd) score += w.radd;
    if (s.final_base != s.adjustment.adjusted_base) score += w.tashih;
    return std::min(score, 10.0);
}

void GenSpec::validate() const {
    if (target_count == 0) throw InputError("target_count must be at least 1");
    if (max_heads < 2) throw InputError("max_heads must be at least 2");
    if (max_attempts == 0) throw InputError("max_attempts must be at least 1");
    auto check = [](const auto& m, const char* what) {
        double sum = 0;
        for (const auto& [k, p] : m) {
            if (p < 0) throw InputError(std::string(what) + " has a negative proportion");
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-9) throw InputError(std::string(what) + " proportions must sum to 1");
    };
    check(category_targets, "category_targets");
    check(difficulty_mix, "difficulty_mix");
}

GenSpec default_gen_spec() {
    GenSpec spec;
    spec.category_targets = {{Category::simple, 5531.0 / 5900.0},
                             {Category::awl, 288.0 / 5900.0},
                             {Category::radd, 81.0 / 5900.0}};
    spec.difficulty_mix = {{Difficulty::simple, 61.0 / 200.0},
                           {Difficulty::moderate, 67.0 / 200.0},
                           {Difficulty::complex, 33.0 / 200.0},
                           {Difficulty::very_complex, 39.0 / 200.0}};
    return spec;
}

std::map<Category, double> dev_category_mix() {
    return {{Category::simple, 125.0 / 200.0}, {Category::awl, 4.0 / 200.0}, {Category::radd, 71.0 / 200.0}};
}

CaseInput sample_config(const GenSpec& spec, Category target, Difficulty regime, std::mt19937_64& rng) {
    const auto [lo, hi] = kind_range(regime);
    const int kinds = uniform(rng, lo, hi);
    Draft d{{}, spec.max_heads};
    switch (target) {
        case Category::simple: sample_simple(d, kinds, rng); break;
        case Category::awl: sample_awl(d, kinds, rng); break;
        case Category::radd: sample_radd(d, kinds, rng, profile_by_id(spec.profile_id)); break;
    }
    if (chance(rng, spec.estate_rate)) d.in.estate = 1200LL * uniform(rng, 1, 250);
    return d.in;
}

CaseInput sample_config(const GenSpec& spec, std::mt19937_64& rng) {
    auto draw = [&rng](const auto& m) {
        std::vector<double> w;
        for (const auto& [k, p] : m) w.push_back(p);
        auto it = m.begin();
        std::advance(it, std::discrete_distribution<std::size_t>(w.begin(), w.end())(rng));
        return it->first;
    };
    const Category c = draw(spec.category_targets);
    const Difficulty d = draw(spec.difficulty_mix);
    return sample_config(spec, c, d, rng);
}

void generate_corpus(const GenSpec& spec, const std::function<void(Document&&)>& sink) {
    spec.validate();
    const RuleProfile& profile = profile_by_id(spec.profile_id);
    Rng rng(spec.seed);

    const auto quotas = apportion(spec.category_targets, spec.target_count);
    std::vector<Category> schedule;
    schedule.reserve(spec.target_count);
    for (const auto& [c, n] : quotas) schedule.insert(schedule.end(), n, c);
    std::shuffle(schedule.begin(), schedule.end(), rng);

    std::vector<Difficulty> regimes;
    std::vector<double> regime_weights;
    for (const auto& [d, p] : spec.difficulty_mix) {
        regimes.push_back(d);
        regime_weights.push_back(p);
    }
    std::discrete_distribution<std::size_t> regime_draw(regime_weights.begin(), regime_weights.end());

    std::unordered_set<std::string> seen;
    seen.reserve(spec.target_count * 2);
    std::map<Category, std::size_t> made;
    std::size_t emitted = 0;

    for (Category cat : schedule) {
        const auto first = static_cast<std::size_t>(regimes[regime_draw(rng)]);
        bool done = false;
        // A regime that has run dry hands over to the next harder one.
        for (std::size_t step = 0; step < kRegimes.size() && !done; ++step) {
            const Difficulty regime = kRegimes[(first + step) % kRegimes.size()];
            for (std::size_t attempt = 0; attempt < spec.max_attempts; ++attempt) {
                CaseInput in = sample_config(spec, cat, regime, rng);
                std::string key = case_fingerprint(in);
                if (seen.contains(key)) continue;
                SolvedCase solved = solve_case(in, profile);
                if (category_of(solved.adjustment.kind) != cat) continue;
                seen.insert(std::move(key));
                Document doc = render_views(solved, rng);
                char id[32];
                std::snprintf(id, sizeof id, "case-%06zu", ++emitted);
                doc.id = id;
                doc.difficulty = difficulty_score(solved, spec.weights);
                ++made[cat];
                sink(std::move(doc));
                done = true;
                break;
            }
        }
        if (!done) {
            throw CapacityError("no further unique " + std::string(to_string(cat)) + " cases: produced " +
                                std::to_string(made[cat]) + " of " + std::to_string(quotas.at(cat)));
        }
    }
}

std::vector<Document> generate_corpus(const GenSpec& spec) {
    std::vector<Document> out;
    out.reserve(spec.target_count);
    generate_corpus(spec, [&out](Document&& d) { out.push_back(std::move(d)); });
    return out;
}

std::vector<QueryItem> make_query_split(const std::vector<Document>& corpus, std::size_t n,
                                        const std::map<Category, double>& mix, std::uint64_t seed,
                                        const TemplateBank& bank) {
    Rng rng(seed);
    const auto quotas = apportion(mix, n);
    std::vector<const Document*> chosen;
    for (Category c : kCategories) {
        const auto it = quotas.find(c);
        if (it == quotas.end() || it->second == 0) continue;
        std::vector<const Document*> pool;
        for (const Document& d : corpus) {
            if (d.category == c) pool.push_back(&d);
        }
        if (pool.size() < it->second) {
            throw CapacityError("query split needs " + std::to_string(it->second) + " " + std::string(to_string(c)) +
                                " documents, corpus has " + std::to_string(pool.size()));
        }
        std::shuffle(pool.begin(), pool.end(), rng);
        chosen.insert(chosen.end(), pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(it->second));
    }
    std::shuffle(chosen.begin(), chosen.end(), rng);

    std::vector<QueryItem> out;
    out.reserve(chosen.size());
    for (const Document* d : chosen) {
        char id[32];
        std::snprintf(id, sizeof id, "q-%05zu", out.size() + 1);
        out.push_back({id, render_query(d->structured_output.input, rng, bank), d->id, d->category});
    }
    return out;
}

}  // namespace mawarith
