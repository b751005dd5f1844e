#ifndef WAVELAB_IO_HPP
#define WAVELAB_IO_HPP

#include <filesystem>
#include <string>

#include "wavelab/dno.hpp"
#include "wavelab/waterwave.hpp"

namespace wavelab {

/// Flat binary Field layout: int32 d, int32 n, float64 L (little-endian),
/// then n^d row-major float64 samples (real parts).
void write_field(const Field& f, const std::filesystem::path& path);
Field read_field(const std::filesystem::path& path);

/// Debug CSV: one row per grid point, columns x0[,x1],value.
void write_field_csv(const Field& f, const std::filesystem::path& path);

/// StripField layout: the Field header extended with int32 n_z and the z-node
/// vector, then n_z level-major n^d float64 payloads.
void write_strip_field(const StripField& v, const std::filesystem::path& path);
StripField read_strip_field(const std::filesystem::path& path);

/// Persists a trajectory as a directory of Field snapshots plus
/// manifest.json (times, parameters, norms and conserved quantities per
/// snapshot).
void write_trajectory(const Trajectory& traj, const WaveParams& params, double s_norms,
                      const std::filesystem::path& dir);
bool trajectory_complete(const std::filesystem::path& dir);

}  // namespace wavelab

#endif
