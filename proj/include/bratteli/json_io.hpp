#ifndef BRATTELI_JSON_IO_HPP
#define BRATTELI_JSON_IO_HPP

#include <string>
#include <utility>

#include <json.hpp>

#include "bratteli/skeleton.hpp"

namespace bratteli {

using json = nlohmann::ordered_json;

// Schemas are documented in docs/formats.md. All loaders throw input_error
// with a message naming the offending field.

json load_json_file(const std::string& path);

BratteliDiagram diagram_from_json(const json& j, int depth_override = -1);
json diagram_to_json(const BratteliDiagram& b);

DiagramOrder order_from_json(const BratteliDiagram& b, const json& j);
json order_to_json(const BratteliDiagram& b, const DiagramOrder& o);

struct SkeletonData {
    Skeleton skeleton;
    Correspondence sigma;
};

SkeletonData skeleton_from_json(const BratteliDiagram& b, const json& j);
json skeleton_to_json(const BratteliDiagram& b, const Skeleton& s, const Correspondence& c);

}  // namespace bratteli

#endif
