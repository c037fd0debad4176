// Copyright 2026 The claimdpo Authors
// SPDX-License-Identifier: Apache-2.0

#include "claimdpo/checkpoint.hpp"

#include <bit>
#include <cstring>

#include "claimdpo/error.hpp"
#include "claimdpo/jsonl.hpp"

namespace claimdpo {
namespace {

constexpr char kMagic[8] = {'C', 'D', 'P', 'O', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little, "checkpoint IO assumes little endian");

class Writer {
 public:
  void raw(const void* p, std::size_t n) { buf_.append(static_cast<const char*>(p), n); }
  void u32(std::uint32_t v) { raw(&v, sizeof v); }
  void u64(std::uint64_t v) { raw(&v, sizeof v); }
  void str(const std::string& s) {
    u64(s.size());
    raw(s.data(), s.size());
  }
  void doubles(std::span<const double> d) {
    u64(d.size());
    raw(d.data(), d.size_bytes());
  }
  const std::string& bytes() const { return buf_; }

 private:
  std::string buf_;
};

class Reader {
 public:
  explicit Reader(std::string bytes) : buf_(std::move(bytes)) {}
  void raw(void* p, std::size_t n) {
    if (pos_ + n > buf_.size()) throw Error("checkpoint is truncated");
    std::memcpy(p, buf_.data() + pos_, n);
    pos_ += n;
  }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    raw(&v, sizeof v);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v = 0;
    raw(&v, sizeof v);
    return v;
  }
  std::string str() {
    std::string s(u64(), '\0');
    raw(s.data(), s.size());
    return s;
  }
  void doubles(std::span<double> out) {
    if (u64() != out.size()) throw Error("checkpoint tensor has the wrong size");
    raw(out.data(), out.size_bytes());
  }
  bool done() const { return pos_ == buf_.size(); }

 private:
  std::string buf_;
  std::size_t pos_ = 0;
};

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  const auto& d = ckpt.params.dims;
  if (ckpt.tokenizer.size() != d.vocab) {
    throw ValidationError("checkpoint tokenizer and policy disagree on vocabulary size");
  }
  Writer w;
  w.raw(kMagic, sizeof kMagic);
  w.u32(kVersion);
  w.u64(d.vocab);
  w.u64(d.context);
  w.u64(d.embed);
  w.u64(d.hidden);
  w.u64(d.rank);
  w.u32(ckpt.params.adapter_enabled ? 1 : 0);
  w.u64(ckpt.tokenizer.size());
  for (const auto& tok : ckpt.tokenizer.vocab()) w.str(tok);
  for_each_tensor(ckpt.params,
                  [&](TensorKind, std::span<const double> t) { w.doubles(t); });
  write_text_file(path, w.bytes());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  Reader r(read_text_file(path));
  char magic[8];
  r.raw(magic, sizeof magic);
  if (std::memcmp(magic, kMagic, sizeof magic) != 0) {
    throw Error(path.string() + " is not a policy checkpoint");
  }
  if (const auto v = r.u32(); v != kVersion) {
    throw Error("unsupported checkpoint version " + std::to_string(v));
  }
  PolicyDims d;
  d.vocab = r.u64();
  d.context = r.u64();
  d.embed = r.u64();
  d.hidden = r.u64();
  d.rank = r.u64();
  const bool adapter = r.u32() != 0;
  std::vector<std::string> vocab(r.u64());
  for (auto& tok : vocab) tok = r.str();
  Checkpoint ck{Tokenizer(std::move(vocab)), zero_policy(d, adapter)};
  for_each_tensor(ck.params, [&](TensorKind, std::span<double> t) { r.doubles(t); });
  if (!r.done()) throw Error("checkpoint has trailing bytes");
  return ck;
}

}  // namespace claimdpo
