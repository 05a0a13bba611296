#include "bratteli/json_io.hpp"

#include <algorithm>
#include <fstream>

namespace bratteli {

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw input_error("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

namespace {

void check_version(const json& j) {
    if (!j.is_object()) throw input_error("expected a JSON object");
    if (j.contains("version") && j["version"].get<int>() != 1)
        throw input_error("unsupported schema version");
}

Matrix matrix_from_json(const json& j) {
    Matrix m;
    for (const auto& row : j) {
        std::vector<long long> r;
        for (const auto& x : row) r.push_back(x.get<long long>());
        m.push_back(std::move(r));
    }
    return m;
}

}  // namespace

BratteliDiagram diagram_from_json(const json& j, int depth_override) {
    check_version(j);
    bool stationary = j.value("stationary", false);
    BratteliDiagram b = [&] {
        if (j.contains("matrices")) {
            std::vector<Matrix> ms;
            for (const auto& mj : j["matrices"]) ms.push_back(matrix_from_json(mj));
            auto d = BratteliDiagram::from_matrices(std::move(ms), stationary);
            if (j.contains("levels")) {
                const auto& lv = j["levels"];
                for (std::size_t i = 0; i < lv.size(); ++i)
                    if (i <= static_cast<std::size_t>(d.depth()) &&
                        d.vertex_count(static_cast<int>(i)) != lv[i].get<int>())
                        throw input_error("levels field contradicts the matrices");
            }
            return d;
        }
        if (j.contains("edges")) {
            if (!j.contains("levels")) throw input_error("edge-list diagrams need a levels field");
            std::vector<int> levels;
            for (const auto& x : j["levels"]) levels.push_back(x.get<int>());
            std::vector<std::vector<std::pair<int, int>>> edges;
            for (const auto& level : j["edges"]) {
                std::vector<std::pair<int, int>> es;
                for (const auto& e : level) es.push_back({e[0].get<int>(), e[1].get<int>()});
                edges.push_back(std::move(es));
            }
            return BratteliDiagram::from_edges(std::move(levels), std::move(edges), stationary);
        }
        throw input_error("diagram needs either matrices or edges");
    }();
    if (j.contains("names")) {
        std::vector<std::string> names;
        for (const auto& x : j["names"]) names.push_back(x.get<std::string>());
        b.set_names(std::move(names));
    }
    if (depth_override > b.depth()) b = b.extended(depth_override);
    return b;
}

json diagram_to_json(const BratteliDiagram& b) {
    json j;
    j["version"] = 1;
    j["levels"] = json::array();
    for (int n = 0; n <= b.depth(); ++n) j["levels"].push_back(b.vertex_count(n));
    j["matrices"] = json::array();
    for (int n = 0; n < b.depth(); ++n) j["matrices"].push_back(b.incidence(n));
    j["stationary"] = b.stationary();
    if (!b.names().empty()) j["names"] = b.names();
    return j;
}

DiagramOrder order_from_json(const BratteliDiagram& b, const json& j) {
    check_version(j);
    if (j.contains("words")) {
        std::vector<std::vector<int>> words;
        for (const auto& w : j["words"]) words.push_back(w.get<std::vector<int>>());
        return DiagramOrder::stationary_from_source_words(b, words);
    }
    if (!j.contains("levels")) throw input_error("order needs words or levels");
    std::vector<std::vector<std::vector<EdgeId>>> perms;
    int k = 1;
    for (const auto& level : j["levels"]) {
        std::vector<std::vector<EdgeId>> by_vertex;
        int v = 0;
        for (const auto& perm : level) {
            std::vector<EdgeId> edges;
            for (const auto& ref : perm)
                edges.push_back(EdgeId{k, v, ref[0].get<int>(), ref[1].get<int>()});
            by_vertex.push_back(std::move(edges));
            ++v;
        }
        perms.push_back(std::move(by_vertex));
        ++k;
    }
    return DiagramOrder::assign(b, std::move(perms));
}

json order_to_json(const BratteliDiagram& b, const DiagramOrder& o) {
    json j;
    j["version"] = 1;
    j["levels"] = json::array();
    for (int k = 1; k <= b.depth(); ++k) {
        json level = json::array();
        for (int v = 0; v < b.vertex_count(k); ++v) {
            json perm = json::array();
            for (const EdgeId& e : o.at(k, v)) perm.push_back(json::array({e.source, e.copy}));
            level.push_back(std::move(perm));
        }
        j["levels"].push_back(std::move(level));
    }
    return j;
}

SkeletonData skeleton_from_json(const BratteliDiagram& b, const json& j) {
    check_version(j);
    bool stationary = j.value("stationary", false);
    SkeletonData data;
    auto edge_levels = [&](const json& arr, int target_levels) {
        std::vector<json> out;
        if (stationary && arr.size() == 1) {
            out.assign(target_levels, arr[0]);
        } else {
            for (const auto& x : arr) out.push_back(x);
        }
        if (static_cast<int>(out.size()) != target_levels)
            throw input_error("skeleton level count mismatch");
        return out;
    };

    int edge_level_count = b.depth() - 1;  // levels 2..depth
    auto mx = edge_levels(j.at("max_edges"), edge_level_count);
    auto mn = edge_levels(j.at("min_edges"), edge_level_count);
    for (int k = 2; k <= b.depth(); ++k) {
        std::vector<EdgeId> row_mx, row_mn;
        for (int v = 0; v < b.vertex_count(k); ++v) {
            const auto& em = mx[k - 2].at(v);
            const auto& en = mn[k - 2].at(v);
            row_mx.push_back(EdgeId{k, v, em[0].get<int>(), em[1].get<int>()});
            row_mn.push_back(EdgeId{k, v, en[0].get<int>(), en[1].get<int>()});
        }
        data.skeleton.max_edges.push_back(std::move(row_mx));
        data.skeleton.min_edges.push_back(std::move(row_mn));
    }

    auto mask_levels = [&](const json& arr) {
        std::vector<json> out;
        if (stationary && arr.size() == 1) {
            out.assign(b.depth(), arr[0]);
        } else {
            for (const auto& x : arr) out.push_back(x);
        }
        if (static_cast<int>(out.size()) != b.depth())
            throw input_error("extremal vertex list count mismatch");
        return out;
    };
    auto vt_levels = mask_levels(j.at("max_vertices"));
    auto vb_levels = mask_levels(j.at("min_vertices"));
    for (int n = 1; n <= b.depth(); ++n) {
        std::vector<char> vmx(b.vertex_count(n), 0), vmn(b.vertex_count(n), 0);
        for (const auto& x : vt_levels[n - 1]) vmx.at(x.get<int>()) = 1;
        for (const auto& x : vb_levels[n - 1]) vmn.at(x.get<int>()) = 1;
        data.skeleton.max_vertices.push_back(std::move(vmx));
        data.skeleton.min_vertices.push_back(std::move(vmn));
    }

    const json& sj = j.at("sigma");
    std::vector<json> sigma_levels;
    if (stationary && sj.size() == 1) {
        sigma_levels.assign(b.depth(), sj[0]);
    } else {
        for (const auto& x : sj) sigma_levels.push_back(x);
    }
    for (int n = 1; n <= static_cast<int>(sigma_levels.size()) && n <= b.depth(); ++n) {
        std::vector<std::vector<int>> level(b.vertex_count(n));
        for (const auto& entry : sigma_levels[n - 1]) {
            int vt = entry[0].get<int>();
            std::vector<int> img = entry[1].get<std::vector<int>>();
            std::sort(img.begin(), img.end());
            level.at(vt) = std::move(img);
        }
        data.sigma.sigma.push_back(std::move(level));
    }
    return data;
}

json skeleton_to_json(const BratteliDiagram& b, const Skeleton& s, const Correspondence& c) {
    json j;
    j["version"] = 1;
    j["max_edges"] = json::array();
    j["min_edges"] = json::array();
    for (int k = 2; k <= b.depth(); ++k) {
        json mx = json::array(), mn = json::array();
        for (int v = 0; v < b.vertex_count(k); ++v) {
            mx.push_back(json::array(
                {s.max_edges[k - 2][v].source, s.max_edges[k - 2][v].copy}));
            mn.push_back(json::array(
                {s.min_edges[k - 2][v].source, s.min_edges[k - 2][v].copy}));
        }
        j["max_edges"].push_back(std::move(mx));
        j["min_edges"].push_back(std::move(mn));
    }
    j["max_vertices"] = json::array();
    j["min_vertices"] = json::array();
    for (int n = 1; n <= b.depth(); ++n) {
        j["max_vertices"].push_back(s.max_vertex_list(n));
        j["min_vertices"].push_back(s.min_vertex_list(n));
    }
    j["sigma"] = json::array();
    for (int n = 1; n <= c.levels(); ++n) {
        json level = json::array();
        for (int vt = 0; vt < b.vertex_count(n); ++vt)
            if (!c.at(n, vt).empty()) level.push_back(json::array({vt, c.at(n, vt)}));
        j["sigma"].push_back(std::move(level));
    }
    return j;
}

}  // namespace bratteli
