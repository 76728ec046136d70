#include "akg/lattice.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <thread>

#include "akg/error.hpp"

namespace akg {

namespace {

std::size_t words_for(std::size_t bits) { return (bits + 63) / 64; }

// The chi-cut of a fuzzy context as a crisp incidence, in both orientations.
struct CrispCut {
    std::size_t objects = 0;
    std::size_t attributes = 0;
    std::vector<Bitset> rows;
    std::vector<Bitset> cols;

    explicit CrispCut(const FuzzyContext& ctx)
        : objects(ctx.object_count()), attributes(ctx.attribute_count()) {
        rows.reserve(objects);
        cols.assign(attributes, Bitset(objects));
        for (std::size_t g = 0; g < objects; ++g) {
            rows.push_back(ctx.cut_row(g, ctx.chi()));
            const auto& row = rows.back();
            for (auto a = row.find_first(); a != Bitset::npos; a = row.find_next(a)) cols[a].set(g);
        }
    }

    Bitset extent_of(const Bitset& intent) const {
        Bitset ext(objects);
        ext.set();
        for (auto a = intent.find_first(); a != Bitset::npos; a = intent.find_next(a)) ext &= cols[a];
        return ext;
    }

    Bitset intent_of(const Bitset& extent) const {
        Bitset in(attributes);
        in.set();
        auto n = extent.count();
        if (n * words_for(attributes) <= attributes * words_for(objects)) {
            for (auto g = extent.find_first(); g != Bitset::npos; g = extent.find_next(g)) in &= rows[g];
        } else {
            for (std::size_t a = 0; a < attributes; ++a) {
                if (!extent.is_subset_of(cols[a])) in.reset(a);
            }
        }
        return in;
    }
};

struct RawConcept {
    Bitset extent;
    Bitset intent;
};

// Close-by-One: each closed intent is generated once, from the branch whose
// new attributes all lie at or above the branching attribute.
void close_by_one(const CrispCut& cut, const Bitset& extent, const Bitset& intent, std::size_t from,
                  std::vector<RawConcept>& out) {
    out.push_back({extent, intent});
    for (std::size_t j = from; j < cut.attributes; ++j) {
        if (intent.test(j)) continue;
        Bitset ext = extent & cut.cols[j];
        Bitset in = cut.intent_of(ext);
        Bitset fresh = in - intent;
        if (fresh.find_first() < j) continue;
        close_by_one(cut, ext, in, j + 1, out);
    }
}

std::vector<RawConcept> enumerate_concepts(const CrispCut& cut, unsigned threads) {
    Bitset all(cut.objects);
    all.set();
    Bitset root_intent = cut.intent_of(all);

    std::vector<std::size_t> branches;
    for (std::size_t j = 0; j < cut.attributes; ++j) {
        if (!root_intent.test(j)) branches.push_back(j);
    }

    auto run_branch = [&](std::size_t j, std::vector<RawConcept>& out) {
        Bitset ext = all & cut.cols[j];
        Bitset in = cut.intent_of(ext);
        Bitset fresh = in - root_intent;
        if (fresh.find_first() < j) return;
        close_by_one(cut, ext, in, j + 1, out);
    };

    std::vector<RawConcept> result;
    result.push_back({all, root_intent});
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(branches.size())));
    if (threads <= 1) {
        for (auto j : branches) run_branch(j, result);
        return result;
    }
    std::vector<std::vector<RawConcept>> partial(threads);
    {
        std::vector<std::jthread> workers;
        for (unsigned t = 0; t < threads; ++t) {
            workers.emplace_back([&, t] {
                for (std::size_t i = t; i < branches.size(); i += threads) run_branch(branches[i], partial[t]);
            });
        }
    }
    for (auto& part : partial) {
        std::move(part.begin(), part.end(), std::back_inserter(result));
    }
    return result;
}

double object_membership(const FuzzyContext& ctx, std::size_t object, const Bitset& intent) {
    auto need = intent.count();
    if (need == 0) return 1.0;
    double lowest = 1.0;
    std::size_t seen = 0;
    for (const auto& inc : ctx.row(object)) {
        if (inc.attribute < intent.size() && intent.test(inc.attribute)) {
            lowest = std::min(lowest, inc.membership);
            ++seen;
        }
    }
    return seen < need ? 0.0 : lowest;
}

void attach_memberships(FuzzyConcept& c, const FuzzyContext& ctx) {
    c.memberships.clear();
    c.memberships.reserve(c.extent.count());
    for (auto g = c.extent.find_first(); g != Bitset::npos; g = c.extent.find_next(g)) {
        c.memberships.push_back(object_membership(ctx, g, c.intent));
    }
}

// Lower covers of a concept: the closures of intent+{m} that are reached from
// every attribute they add.
template <typename Lookup>
std::vector<ConceptId> lower_covers(const FuzzyConcept& c, const CrispCut& cut, const Lookup& lookup) {
    std::unordered_map<Bitset, std::size_t> counts;
    for (std::size_t m = 0; m < cut.attributes; ++m) {
        if (c.intent.test(m)) continue;
        ++counts[cut.intent_of(c.extent & cut.cols[m])];
    }
    std::vector<ConceptId> out;
    for (const auto& [intent, n] : counts) {
        if (n == (intent - c.intent).count()) out.push_back(lookup(intent));
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool intent_less(const Bitset& a, const Bitset& b) {
    auto ca = a.count();
    auto cb = b.count();
    if (ca != cb) return ca < cb;
    // lexicographic on ascending attribute index
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a.test(i) != b.test(i)) return a.test(i);
    }
    return false;
}

}  // namespace

double FuzzyConcept::membership_of(std::size_t object) const {
    if (object >= extent.size() || !extent.test(object)) return 0.0;
    std::size_t rank = 0;
    for (auto g = extent.find_first(); g != object; g = extent.find_next(g)) ++rank;
    return memberships[rank];
}

// Completes derived fields of a lattice whose concepts and children are set.
class LatticeAssembler {
public:
    static void finalize(ConceptLattice& l, const FuzzyContext& ctx) {
        l.chi_ = ctx.chi();
        l.object_count_ = ctx.object_count();
        l.attribute_count_ = ctx.attribute_count();
        l.context_hash_ = context_hash(ctx);
        l.by_intent_.clear();
        l.parents_.assign(l.concepts_.size(), {});
        for (auto& c : l.concepts_) {
            l.by_intent_.emplace(c.intent, c.id);
            c.support = l.object_count_ == 0 ? 1.0
                                             : static_cast<double>(c.extent.count()) / static_cast<double>(l.object_count_);
        }
        for (ConceptId p = 0; p < l.children_.size(); ++p) {
            std::sort(l.children_[p].begin(), l.children_[p].end());
            for (auto ch : l.children_[p]) l.parents_[ch].push_back(p);
        }
        for (auto& ps : l.parents_) std::sort(ps.begin(), ps.end());
        Bitset all_attrs(l.attribute_count_);
        all_attrs.set();
        l.bottom_ = l.by_intent_.at(all_attrs);
        l.top_ = l.bottom_;
        for (const auto& c : l.concepts_) {
            if (l.parents_[c.id].empty()) l.top_ = c.id;
        }
    }

    static ConceptLattice build(const FuzzyContext& ctx, const BuildOptions& options) {
        CrispCut cut(ctx);
        auto raw = enumerate_concepts(cut, options.threads);
        std::sort(raw.begin(), raw.end(), [](const RawConcept& a, const RawConcept& b) {
            return intent_less(a.intent, b.intent);
        });

        std::vector<FuzzyConcept> provisional(raw.size());
        std::unordered_map<Bitset, ConceptId> index;
        for (std::size_t i = 0; i < raw.size(); ++i) {
            provisional[i].id = static_cast<ConceptId>(i);
            provisional[i].intent = std::move(raw[i].intent);
            provisional[i].extent = std::move(raw[i].extent);
            index.emplace(provisional[i].intent, static_cast<ConceptId>(i));
        }
        auto lookup = [&](const Bitset& b) { return index.at(b); };
        std::vector<std::vector<ConceptId>> children(provisional.size());
        for (const auto& c : provisional) children[c.id] = lower_covers(c, cut, lookup);

        // ids follow a breadth-first visit from the top (provisional index 0: the smallest intent)
        std::vector<ConceptId> order;
        std::vector<ConceptId> relabel(provisional.size(), 0);
        std::vector<bool> seen(provisional.size(), false);
        std::deque<ConceptId> queue{0};
        seen[0] = true;
        while (!queue.empty()) {
            auto c = queue.front();
            queue.pop_front();
            relabel[c] = static_cast<ConceptId>(order.size());
            order.push_back(c);
            for (auto ch : children[c]) {
                if (!seen[ch]) {
                    seen[ch] = true;
                    queue.push_back(ch);
                }
            }
        }
        if (order.size() != provisional.size()) {
            throw std::logic_error("concept order is not connected");
        }

        ConceptLattice l;
        l.concepts_.resize(provisional.size());
        l.children_.resize(provisional.size());
        for (auto old : order) {
            auto id = relabel[old];
            auto& c = l.concepts_[id];
            c = std::move(provisional[old]);
            c.id = id;
            attach_memberships(c, ctx);
            for (auto ch : children[old]) l.children_[id].push_back(relabel[ch]);
        }
        finalize(l, ctx);
        return l;
    }

    static ConceptLattice rebuild_keeping_ids(const ConceptLattice& prior, const FuzzyContext& ctx) {
        auto fresh = build(ctx, {});
        const auto n_old = prior.concepts_.size();
        std::vector<ConceptId> target(fresh.concepts_.size(), 0);
        std::vector<bool> assigned(fresh.concepts_.size(), false);
        std::vector<bool> used(n_old, false);
        for (const auto& c : fresh.concepts_) {
            bool fits = true;
            for (auto a = c.intent.find_first(); a != Bitset::npos; a = c.intent.find_next(a)) {
                if (a >= prior.attribute_count_) fits = false;
            }
            if (!fits) continue;
            Bitset narrowed = c.intent;
            narrowed.resize(prior.attribute_count_);
            if (auto old = prior.find_by_intent(narrowed)) {
                target[c.id] = *old;
                assigned[c.id] = true;
                used[*old] = true;
            }
        }
        if (!used[prior.bottom_] && !assigned[fresh.bottom_]) {
            target[fresh.bottom_] = prior.bottom_;
            assigned[fresh.bottom_] = true;
            used[prior.bottom_] = true;
        }
        if (std::find(used.begin(), used.end(), false) != used.end()) {
            throw std::logic_error("object insertion removed an existing concept");
        }
        auto next = static_cast<ConceptId>(n_old);
        for (const auto& c : fresh.concepts_) {
            if (!assigned[c.id]) target[c.id] = next++;
        }

        ConceptLattice l;
        l.concepts_.resize(fresh.concepts_.size());
        l.children_.resize(fresh.concepts_.size());
        for (auto& c : fresh.concepts_) {
            auto id = target[c.id];
            for (auto ch : fresh.children_[c.id]) l.children_[id].push_back(target[ch]);
            l.concepts_[id] = std::move(c);
            l.concepts_[id].id = id;
        }
        finalize(l, ctx);
        return l;
    }

    static IncrementalResult insert(const ConceptLattice& lattice, const FuzzyContext& ctx, const ObjectId& object,
                                    const std::vector<AttributeMembership>& memberships) {
        if (lattice.object_count_ != ctx.object_count() || lattice.attribute_count_ != ctx.attribute_count() ||
            lattice.chi_ != ctx.chi() || lattice.context_hash_ != context_hash(ctx)) {
            throw Error(ErrorCode::invalid_argument, "lattice was not built from the given context");
        }
        FuzzyContext next = ctx;
        next.add_object(object, memberships);
        if (next.attribute_count() != ctx.attribute_count()) {
            return {rebuild_keeping_ids(lattice, next), std::move(next)};
        }

        CrispCut cut(next);
        const auto g = ctx.object_count();
        const Bitset& row = cut.rows[g];

        ConceptLattice l = lattice;
        std::vector<ConceptId> touched;
        for (auto& c : l.concepts_) {
            c.extent.push_back(false);
            if (c.intent.is_subset_of(row)) {
                c.extent.set(g);
                c.memberships.push_back(object_membership(next, g, c.intent));
                touched.push_back(c.id);
            }
        }
        for (const auto& c : lattice.concepts_) {
            if (c.intent.is_subset_of(row)) continue;
            Bitset meet = c.intent & row;
            if (l.by_intent_.contains(meet)) continue;
            FuzzyConcept fresh;
            fresh.id = static_cast<ConceptId>(l.concepts_.size());
            fresh.extent = cut.extent_of(meet);
            fresh.intent = std::move(meet);
            attach_memberships(fresh, next);
            l.by_intent_.emplace(fresh.intent, fresh.id);
            touched.push_back(fresh.id);
            l.concepts_.push_back(std::move(fresh));
        }
        l.children_.resize(l.concepts_.size());
        auto lookup = [&](const Bitset& b) { return l.by_intent_.at(b); };
        for (auto id : touched) l.children_[id] = lower_covers(l.concepts_[id], cut, lookup);
        finalize(l, next);
        return {std::move(l), std::move(next)};
    }

    static ConceptLattice from_json(const nlohmann::json& doc, const FuzzyContext& ctx) {
        ConceptLattice l;
        const auto& concepts = doc.at("concepts");
        l.concepts_.resize(concepts.size());
        l.children_.resize(concepts.size());
        std::vector<bool> seen(concepts.size(), false);
        for (const auto& entry : concepts) {
            auto id = entry.at("id").get<ConceptId>();
            if (id >= concepts.size() || seen[id]) {
                throw Error(ErrorCode::corrupt, "lattice snapshot has invalid concept id " + std::to_string(id));
            }
            seen[id] = true;
            auto& c = l.concepts_[id];
            c.id = id;
            c.intent = Bitset(ctx.attribute_count());
            for (const auto& name : entry.at("intent")) c.intent.set(ctx.attribute_index(name.get<std::string>()));
            c.extent = Bitset(ctx.object_count());
            std::map<std::size_t, double> members;
            for (const auto& [name, mu] : entry.at("extent").items()) {
                auto g = ctx.object_index(name);
                c.extent.set(g);
                members[g] = mu.get<double>();
            }
            for (const auto& [g, mu] : members) c.memberships.push_back(mu);
        }
        for (const auto& edge : doc.at("covers")) {
            auto super = edge.at(0).get<ConceptId>();
            auto sub = edge.at(1).get<ConceptId>();
            if (super >= l.concepts_.size() || sub >= l.concepts_.size()) {
                throw Error(ErrorCode::corrupt, "lattice snapshot has a cover edge to an unknown concept");
            }
            l.children_[super].push_back(sub);
        }
        finalize(l, ctx);
        return l;
    }
};

const FuzzyConcept& ConceptLattice::concept_at(ConceptId id) const {
    if (id >= concepts_.size()) throw Error(ErrorCode::not_found, "unknown concept id " + std::to_string(id));
    return concepts_[id];
}

const std::vector<ConceptId>& ConceptLattice::children(ConceptId id) const {
    concept_at(id);
    return children_[id];
}

const std::vector<ConceptId>& ConceptLattice::parents(ConceptId id) const {
    concept_at(id);
    return parents_[id];
}

std::vector<std::pair<ConceptId, ConceptId>> ConceptLattice::cover_edges() const {
    std::vector<std::pair<ConceptId, ConceptId>> edges;
    for (ConceptId p = 0; p < children_.size(); ++p) {
        for (auto c : children_[p]) edges.emplace_back(p, c);
    }
    return edges;
}

std::vector<ConceptId> ConceptLattice::frequent_concepts(double minsupp) const {
    if (!(minsupp >= 0.0 && minsupp <= 1.0)) {
        throw Error(ErrorCode::invalid_argument, "minsupp must lie in [0,1]");
    }
    std::vector<ConceptId> out;
    for (const auto& c : concepts_) {
        if (c.support >= minsupp) out.push_back(c.id);
    }
    return out;
}

bool ConceptLattice::is_subconcept(ConceptId sub, ConceptId super) const {
    return concept_at(super).intent.is_subset_of(concept_at(sub).intent);
}

std::vector<ConceptId> ConceptLattice::traverse_top_down() const {
    std::vector<ConceptId> order;
    if (concepts_.empty()) return order;
    std::vector<bool> seen(concepts_.size(), false);
    std::deque<ConceptId> queue{top_};
    seen[top_] = true;
    while (!queue.empty()) {
        auto c = queue.front();
        queue.pop_front();
        order.push_back(c);
        for (auto ch : children_[c]) {
            if (!seen[ch]) {
                seen[ch] = true;
                queue.push_back(ch);
            }
        }
    }
    return order;
}

std::optional<ConceptId> ConceptLattice::find_by_intent(const Bitset& intent) const {
    auto it = by_intent_.find(intent);
    if (it == by_intent_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::string> ConceptLattice::intent_names(ConceptId id, const FuzzyContext& context) const {
    const auto& c = concept_at(id);
    std::vector<std::string> names;
    for (auto a = c.intent.find_first(); a != Bitset::npos; a = c.intent.find_next(a)) {
        names.push_back(context.attributes().at(a).name);
    }
    return names;
}

std::map<std::string, double> ConceptLattice::extent_memberships(ConceptId id, const FuzzyContext& context) const {
    const auto& c = concept_at(id);
    std::map<std::string, double> out;
    std::size_t i = 0;
    for (auto g = c.extent.find_first(); g != Bitset::npos; g = c.extent.find_next(g), ++i) {
        out.emplace(context.objects().at(g).name, c.memberships[i]);
    }
    return out;
}

namespace {

std::vector<ConceptLabels> all_labels(const ConceptLattice& lattice, const FuzzyContext& ctx) {
    CrispCut cut(ctx);
    std::vector<ConceptLabels> labels(lattice.size());
    for (std::size_t a = 0; a < cut.attributes; ++a) {
        if (auto id = lattice.find_by_intent(cut.intent_of(cut.cols[a]))) {
            labels[*id].own_attributes.push_back(ctx.attributes()[a].name);
        }
    }
    for (std::size_t g = 0; g < cut.objects; ++g) {
        if (auto id = lattice.find_by_intent(cut.rows[g])) labels[*id].own_objects.push_back(ctx.objects()[g].name);
    }
    return labels;
}

}  // namespace

ConceptLabels ConceptLattice::labels(ConceptId id, const FuzzyContext& context) const {
    concept_at(id);
    return all_labels(*this, context)[id];
}

ConceptLattice build_lattice(const FuzzyContext& context, const BuildOptions& options) {
    return LatticeAssembler::build(context, options);
}

IncrementalResult insert_object_incremental(const ConceptLattice& lattice, const FuzzyContext& context,
                                            const ObjectId& object,
                                            const std::vector<AttributeMembership>& memberships) {
    return LatticeAssembler::insert(lattice, context, object, memberships);
}

IncrementalResult insert_object_incremental(const ConceptLattice& lattice, const FuzzyContext& context,
                                            const ObjectId& object, const MembershipMap& memberships) {
    std::vector<AttributeMembership> list;
    for (const auto& [name, value] : memberships) {
        AttributeId attr{name, AttributeKind::other};
        if (auto idx = context.find_attribute(name)) attr = context.attributes()[*idx];
        list.push_back({attr, value});
    }
    return LatticeAssembler::insert(lattice, context, object, list);
}

nlohmann::json to_json(const ConceptLattice& lattice, const FuzzyContext& context) {
    nlohmann::json doc;
    doc["version"] = kLatticeFormatVersion;
    doc["context-hash"] = lattice.context_hash();
    auto concepts = nlohmann::json::array();
    for (const auto& c : lattice.concepts()) {
        concepts.push_back({{"id", c.id},
                            {"intent", lattice.intent_names(c.id, context)},
                            {"extent", lattice.extent_memberships(c.id, context)},
                            {"support", c.support}});
    }
    doc["concepts"] = std::move(concepts);
    auto covers = nlohmann::json::array();
    for (const auto& [super, sub] : lattice.cover_edges()) covers.push_back({super, sub});
    doc["covers"] = std::move(covers);
    return doc;
}

ConceptLattice lattice_from_json(const nlohmann::json& document, const FuzzyContext& context) {
    try {
        auto version = document.at("version").get<int>();
        if (version != kLatticeFormatVersion) {
            throw Error(ErrorCode::parse_error, "unsupported lattice format version " + std::to_string(version));
        }
        auto expected = document.at("context-hash").get<std::string>();
        if (expected != context_hash(context)) {
            throw Error(ErrorCode::corrupt, "lattice snapshot was built from a different context");
        }
        return LatticeAssembler::from_json(document, context);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::parse_error, std::string("malformed lattice document: ") + e.what());
    } catch (const std::out_of_range& e) {
        throw Error(ErrorCode::corrupt, std::string("inconsistent lattice document: ") + e.what());
    }
}

namespace {

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        if (ch == '"') out.push_back('\\');
        out.push_back(ch);
    }
    return out;
}

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ", ";
        out += items[i];
    }
    return out;
}

}  // namespace

std::string to_dot(const ConceptLattice& lattice, const FuzzyContext& context) {
    auto labels = all_labels(lattice, context);
    std::ostringstream out;
    out << "digraph akg {\n  rankdir=TB;\n  node [shape=box, fontsize=10];\n";
    for (const auto& c : lattice.concepts()) {
        std::vector<std::string> objects;
        for (const auto& [name, mu] : lattice.extent_memberships(c.id, context)) {
            std::ostringstream o;
            o << name << "(" << mu << ")";
            objects.push_back(o.str());
        }
        std::ostringstream label;
        label << "c" << c.id << "  supp=" << c.support << "\\n{" << join(lattice.intent_names(c.id, context))
              << "}\\n{" << join(objects) << "}";
        const auto& own = labels[c.id];
        if (!own.own_attributes.empty()) label << "\\nown attrs: " << join(own.own_attributes);
        if (!own.own_objects.empty()) label << "\\nown objs: " << join(own.own_objects);
        out << "  c" << c.id << " [label=\"" << dot_escape(label.str()) << "\"];\n";
    }
    for (const auto& [super, sub] : lattice.cover_edges()) out << "  c" << super << " -> c" << sub << ";\n";
    out << "}\n";
    return out.str();
}

}  // namespace akg
