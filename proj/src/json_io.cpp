#include "markov/json_io.hpp"

#include <cstdlib>

namespace markov {

using nlohmann::json;

json factors_to_json(const Factors& fs) {
    json out = json::array();
    for (const auto& f : fs) out.push_back({{"name", f.name}, {"card", f.card}});
    return out;
}

Factors factors_from_json(const json& j) {
    if (!j.is_array()) throw Error("factors: expected an array");
    Factors out;
    for (const auto& e : j) {
        if (!e.contains("name") || !e.contains("card"))
            throw Error("factors: entries need name and card");
        out.emplace_back(e["name"].get<std::string>(), e["card"].get<int>());
    }
    return out;
}

namespace {

double entry_value(const json& e) {
    if (e.is_number()) return e.get<double>();
    if (e.is_string()) {
        const std::string& s = e.get_ref<const std::string&>();
        char* end = nullptr;
        double v = std::strtod(s.c_str(), &end);
        if (end == s.c_str() || *end != '\0') throw Error("kernel: bad decimal string '" + s + "'");
        return v;
    }
    throw Error("kernel: entry must be a number or decimal string");
}

}  // namespace

json kernel_to_json(const Kernel& k) {
    json rows = json::array();
    for (std::int64_t x = 0; x < k.dom_size(); ++x) {
        json row = json::array();
        for (std::int64_t y = 0; y < k.cod_size(); ++y) row.push_back(k.at(x, y));
        rows.push_back(std::move(row));
    }
    return {{"dom", factors_to_json(k.dom())}, {"cod", factors_to_json(k.cod())},
            {"rows", std::move(rows)}};
}

Kernel kernel_from_json(const json& j, const Tolerances& tol) {
    if (!j.contains("dom") || !j.contains("cod") || !j.contains("rows"))
        throw Error("kernel: expected dom, cod and rows");
    Factors dom = factors_from_json(j["dom"]);
    Factors cod = factors_from_json(j["cod"]);
    std::int64_t rows = total_card(dom), cols = total_card(cod);
    const json& body = j["rows"];
    if (!body.is_array() || static_cast<std::int64_t>(body.size()) != rows)
        throw Error("kernel: expected " + std::to_string(rows) + " rows");
    std::vector<double> entries;
    entries.reserve(rows * cols);
    for (const auto& row : body) {
        if (!row.is_array() || static_cast<std::int64_t>(row.size()) != cols)
            throw Error("kernel: expected " + std::to_string(cols) + " columns per row");
        for (const auto& e : row) entries.push_back(entry_value(e));
    }
    return Kernel(std::move(dom), std::move(cod), std::move(entries), tol);
}

Model model_from_json(const json& j, SignaturePtr sig, const Tolerances& tol) {
    if (!j.contains("types") || !j.contains("boxes"))
        throw Error("model: expected types and boxes");
    std::vector<int> cards(sig->type_count(), 0);
    for (int t = 0; t < sig->type_count(); ++t) {
        const std::string& name = sig->type_name(t);
        if (!j["types"].contains(name)) throw Error("model: no cardinality for type " + name);
        cards[t] = j["types"][name].get<int>();
    }
    auto factors_of = [&](const std::vector<TypeId>& ts) {
        Factors out;
        for (TypeId t : ts) out.emplace_back(sig->type_name(t), cards[t]);
        return out;
    };
    std::vector<Kernel> kernels;
    for (int b = 0; b < sig->box_count(); ++b) {
        const std::string& name = sig->box_name(b);
        if (!j["boxes"].contains(name)) throw Error("model: no kernel for box " + name);
        const json& spec = j["boxes"][name];
        Factors dom = factors_of(sig->box_inputs(b));
        Factors cod = factors_of(sig->box_outputs(b));
        if (spec.contains("dom")) {
            Kernel k = kernel_from_json(spec, tol);
            if (!same_card(k.dom(), dom) || !same_card(k.cod(), cod))
                throw Error("model: kernel shape mismatch for box " + name);
            kernels.push_back(std::move(k));
        } else {
            if (!spec.contains("rows")) throw Error("model: box " + name + " needs rows");
            json full = {{"dom", factors_to_json(dom)}, {"cod", factors_to_json(cod)},
                         {"rows", spec["rows"]}};
            kernels.push_back(kernel_from_json(full, tol));
        }
    }
    return Model(std::move(sig), std::move(cards), std::move(kernels));
}

json model_to_json(const Model& m) {
    json types = json::object();
    for (int t = 0; t < m.sig->type_count(); ++t) types[m.sig->type_name(t)] = m.type_cards[t];
    json boxes = json::object();
    for (int b = 0; b < m.sig->box_count(); ++b)
        boxes[m.sig->box_name(b)] = kernel_to_json(m.box_kernels[b]);
    return {{"types", std::move(types)}, {"boxes", std::move(boxes)}};
}

json comb_to_json(const Comb& c) {
    return {{"env", factors_to_json(c.env())},
            {"f", kernel_to_json(c.first)},
            {"g", kernel_to_json(c.second)},
            {"boundary",
             {{"A", factors_to_json(c.a())},
              {"A_out", factors_to_json(c.a_prime())},
              {"B", factors_to_json(c.b())},
              {"B_out", factors_to_json(c.b_prime())}}}};
}

Comb comb_from_json(const json& j, const Tolerances& tol) {
    if (!j.contains("env") || !j.contains("f") || !j.contains("g"))
        throw Error("comb: expected env, f and g");
    Factors env = factors_from_json(j["env"]);
    Kernel f = kernel_from_json(j["f"], tol);
    Kernel g = kernel_from_json(j["g"], tol);
    Comb c(std::move(f), std::move(g), static_cast<int>(env.size()));
    if (!same_card(c.env(), env)) throw Error("comb: env does not match the teeth");
    if (j.contains("boundary")) {
        const json& b = j["boundary"];
        if ((b.contains("A") && !same_card(factors_from_json(b["A"]), c.a())) ||
            (b.contains("A_out") && !same_card(factors_from_json(b["A_out"]), c.a_prime())) ||
            (b.contains("B") && !same_card(factors_from_json(b["B"]), c.b())) ||
            (b.contains("B_out") && !same_card(factors_from_json(b["B_out"]), c.b_prime())))
            throw Error("comb: boundary declaration does not match the teeth");
    }
    return c;
}

}  // namespace markov
