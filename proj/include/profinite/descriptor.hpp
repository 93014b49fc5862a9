#pragma once

#include <istream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "profinite/gallery.hpp"
#include "profinite/profmetric.hpp"

namespace profinite {

using Json = nlohmann::json;

/// A family read from a descriptor, with the levels it declares (or the
/// gallery's sample levels) and the gallery data when it names one.
struct LoadedFamily {
  FamilyPtr family;
  std::vector<Index> levels;
  std::optional<GalleryFamily> gallery;
};

/// {"kind": "finite", "names": [...], "leq": [[0/1...]...]},
/// {"kind": "chain", "lo": 1, "hi": 8 | null, "step": 1} or
/// {"kind": "finite-subsets", "lo": 0, "hi": 1, "pool": [...]}.
PosetPtr load_poset(const Json& j);
Json poset_descriptor(const IndexPoset& poset);

/// Integers, arrays of times, or element names of a finite poset.
Index index_from_json(const IndexPoset& poset, const Json& j);
Json index_to_json(const IndexPoset& poset, const Index& j);

/// Either {"gallery": name, "size": n} or an explicit descriptor
/// {"name", "poset", "levels": [{index, dim}], "projections": [{from, to, kind,
/// payload}], "injections": [...]} with kinds matrix, truncation,
/// pl-interpolation and named-gallery. Projections go from the upper level to
/// the lower one, injections from the lower to the upper. Throws ParseError.
LoadedFamily load_family(const Json& j);
/// Reads a descriptor file; a bare gallery name is accepted as well.
LoadedFamily load_family_source(const std::string& name_or_path, int size = -1);

/// Explicit descriptor of a gallery family over its sample levels, with
/// matrix payloads on covering pairs. Loading it back reproduces the maps.
Json export_descriptor(const GalleryFamily& g);

/// {"section": [...], "values": [[...], ...]}, {"gallery": thread name}
/// or {"zero": true}.
Thread load_thread(const LoadedFamily& f, const Json& j);

/// Lines "index,weight"; an optional "tail,<mass>" line bounds the omitted
/// mass. A header line and '#' comments are skipped. Throws ParseError.
IndexMeasure parse_weights_csv(std::istream& in, const IndexPoset& poset);

}  // namespace profinite
