#pragma once

#include <string>
#include <vector>

#include "coarse/corona.hpp"
#include "coarse/cover.hpp"
#include "coarse/guarantee.hpp"
#include "coarse/support.hpp"
#include "coarse/witnesses.hpp"

namespace coarse {

// File contents and parsed JSON; missing files and parse errors throw InvalidInput.
std::string read_text_file(const std::string& path);
Json parse_json(const std::string& text, const std::string& what);
void write_text_file(const std::string& path, const std::string& text);

// {"kind":"matrix","dist":[[...]]} | {"kind":"grid","dim":n,"min":[...],"max":[...],"step":h}
// | {"kind":"tree","edges":[[i,j],...],"nodes"?:n} | {"kind":"hyperbolic_polar","kappa":k,"points":[[r,phi],...]}
// | {"kind":"euclidean","points":[[...],...]}
SpacePtr space_from_json(const Json& j);
// Other space kinds are written as distance matrices.
Json space_to_json(const Space& s);

// {"kind":"radius","r":x,"closed"?:bool} | {"kind":"pairs","pairs":[[i,j],...]};
// pair lists are closed under symmetry on load.
Entourage entourage_from_json(const Json& j, const SpacePtr& space);
Json entourage_to_json(const Entourage& e);

// {"sets":[[...],...],"families"?:[[...],...],"domain"?:[...]}
Cover cover_from_json(const Json& j, const SpacePtr& space);
Json cover_to_json(const Cover& c);

// {"blocks":[[...],...],"dims":[...],"space"?:{...},"mesh_bound"?:x}; without
// a space the blocks live on a discrete space of their points.
Decomposition decomposition_from_json(const Json& j);
// {"dims":[...],"re":[[...]],"im"?:[[...]]}; dims must match d when given.
Matrix operator_from_json(const Json& j, const Decomposition* d = nullptr);
Json operator_to_json(const Matrix& m, const std::vector<std::size_t>& dims);
// {"re":[...],"im"?:[...]}
Vector vector_from_json(const Json& j);

// {"kind":"interval","steps":N} | {"kind":"disk","rings":R,"per_ring":P}
// | {"space":{...},"corona":[...]}
CompactificationModel model_from_json(const Json& j);

struct ScheduleSpec {
  CoronaCoverSchedule schedule;
  std::vector<double> delta;
  Entourage e_n;
};
// {"corona":"circle","points":P} | {"corona":"point"}, with
// "delta": {"kind":"harmonic","c":c} (c/(m+1)) or an explicit list, and
// "e_n": {"kind":"band","width":w} or {"kind":"pairs","pairs":[...]}.
ScheduleSpec schedule_from_json(const Json& j, unsigned depth);

// {"vertices":n,"simplices":[[...],...]}
SimplicialComplex complex_from_json(const Json& j);

}  // namespace coarse
