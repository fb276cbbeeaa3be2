#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>

#include "sigrho/random.hpp"
#include "sigrho/sequence_io.hpp"

namespace {

using namespace sigrho;

bool bit_identical(const IntrinsicVolumeSequence& a, const IntrinsicVolumeSequence& b) {
  if (a.n_max() != b.n_max()) return false;
  for (int n = 1; n <= a.n_max(); ++n) {
    const auto& ra = a.row(n);
    const auto& rb = b.row(n);
    if (std::memcmp(ra.data(), rb.data(), ra.size() * sizeof(double)) != 0) return false;
  }
  return true;
}

TEST(SequenceIo, DegenerateUsesNegInfToken) {
  const auto text = sequence_io::write_string(subconv::degenerate_sequence(2));
  EXPECT_EQ(text, R"({"log_mu":[[0.0,0.0],[0.0,"-inf",0.0]],"n_max":2})");
}

TEST(SequenceIo, BitExactRoundTripOnCubeAndRandomValues) {
  const auto cube = subconv::cube_intrinsic_sequence(0.731, 40);
  EXPECT_TRUE(bit_identical(sequence_io::read_string(sequence_io::write_string(cube)), cube));

  RandomStream rng(1, 0);
  std::vector<std::vector<double>> rows;
  for (int n = 1; n <= 30; ++n) {
    std::vector<double> row(n + 1);
    for (auto& v : row) v = rng.uniform() < 0.2 ? kNegInf : (rng.uniform() - 0.5) * std::pow(10.0, rng.uniform(-300, 300));
    row.front() = rng.uniform(-1e3, 1e3);
    row.back() = std::nextafter(1.0 / 3.0, 1.0);
    rows.push_back(row);
  }
  const IntrinsicVolumeSequence random(rows);
  EXPECT_TRUE(bit_identical(sequence_io::read_string(sequence_io::write_string(random)), random));
}

TEST(SequenceIo, FileRoundTrip) {
  const auto path = (std::filesystem::temp_directory_path() / "sigrho_sequence_io_test.json").string();
  const auto seq = subconv::cube_intrinsic_sequence(1.0, 5);
  sequence_io::write_file(seq, path);
  EXPECT_TRUE(bit_identical(sequence_io::read_file(path), seq));
  std::filesystem::remove(path);
  EXPECT_THROW(sequence_io::read_file(path), ValidationError);
}

TEST(SequenceIo, RejectsMalformedDocuments) {
  const char* bad[] = {
      "not json",
      R"({"log_mu": [[0, 1]]})",
      R"({"n_max": 0, "log_mu": []})",
      R"({"n_max": 2, "log_mu": [[0, 1]]})",
      R"({"n_max": 1, "log_mu": [[0, 1, 2]]})",
      R"({"n_max": 1, "log_mu": [["-inf", 1]]})",
      R"({"n_max": 1, "log_mu": [[0, "nan"]]})",
      R"({"n_max": 1, "log_mu": [[0, "inf"]]})",
      R"({"n_max": 1, "log_mu": [[0, null]]})",
      R"({"n_max": 1.5, "log_mu": [[0, 1]]})",
      R"([1, 2])",
  };
  for (const char* text : bad) EXPECT_THROW(sequence_io::read_string(text), ValidationError) << text;
}

TEST(SequenceIo, AcceptsInteriorNegInf) {
  const auto seq = sequence_io::read_string(R"({"n_max": 2, "log_mu": [[0, 0], [0, "-inf", 0.5]]})");
  EXPECT_EQ(seq.log_mu(2, 1), kNegInf);
  EXPECT_EQ(seq.log_mu(2, 2), 0.5);
}

}  // namespace
