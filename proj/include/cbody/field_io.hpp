#pragma once

// Field import/export. Byte layout of the binary dump is in docs/formats.md.

#include <string>
#include <utility>

#include "cbody/fields.hpp"

namespace cbody {

/// Header "node,x,y,z,u1,u2,u3", one row per node, %.17g.
void write_u_csv(const std::string& path, const FieldState& state, const Grid& grid);
/// Header "node,x,y,z,nu1,...,nuM".
void write_nu_csv(const std::string& path, const FieldState& state, const Grid& grid);

/// Reads back a CSV written by write_u_csv / write_nu_csv into `state`.
/// Throws Error(SizeMismatch) on a node or column count mismatch.
void read_u_csv(const std::string& path, FieldState& state);
void read_nu_csv(const std::string& path, FieldState& state);

void write_binary(const std::string& path, const FieldState& state, const Grid& grid);
/// Restores grid (including its cell mask) and state. The dump records the
/// manifold's name and embedding dimension; both must match `manifold`.
std::pair<Grid, FieldState> read_binary(const std::string& path, ManifoldSpec manifold);

}  // namespace cbody
