#pragma once

#include <map>
#include <memory>
#include <shared_mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>

#include "tlsum/error.hpp"
#include "tlsum/types.hpp"

namespace tlsum {

// Binary entailment of a claim by a set of evidence atoms. Verdicts must be a
// pure function of (evidence, claim) for one backend instance, and backends
// must accept concurrent calls.
class EntailmentBackend {
 public:
  virtual ~EntailmentBackend() = default;
  virtual std::string id() const = 0;
  // Evidence is non-empty when called through entail().
  virtual bool entails(std::span<const EventAtom> evidence, const EventAtom& claim) = 0;
};

// Case-folded, whitespace-collapsed, terminal punctuation stripped.
std::string exact_match_key(std::string_view atom);

// Claim is entailed iff some evidence atom has the same exact_match_key.
class ExactMatchEntailment : public EntailmentBackend {
 public:
  std::string id() const override { return "exact-match"; }
  bool entails(std::span<const EventAtom> evidence, const EventAtom& claim) override;
};

// Fixed verdict table over (evidence atom, claim) text pairs; the set verdict
// is the OR over evidence atoms, unknown pairs are 0.
class ScriptedEntailment : public EntailmentBackend {
 public:
  explicit ScriptedEntailment(std::map<std::pair<std::string, std::string>, bool> table, bool unavailable = false)
      : table_(std::move(table)), unavailable_(unavailable) {}

  std::string id() const override { return "scripted"; }
  bool entails(std::span<const EventAtom> evidence, const EventAtom& claim) override;

 private:
  std::map<std::pair<std::string, std::string>, bool> table_;
  bool unavailable_;
};

// Memoizes verdicts of an inner backend keyed by (backend id, evidence hash,
// claim hash).
class CachingEntailment : public EntailmentBackend {
 public:
  explicit CachingEntailment(EntailmentBackend& inner) : inner_(inner) {}

  std::string id() const override { return inner_.id(); }
  bool entails(std::span<const EventAtom> evidence, const EventAtom& claim) override;

  std::size_t size() const;

 private:
  EntailmentBackend& inner_;
  mutable std::shared_mutex mu_;
  std::unordered_map<std::string, bool> verdicts_;
};

// 0 for empty evidence without consulting the backend.
bool entail(std::span<const EventAtom> evidence, const EventAtom& claim, EntailmentBackend& backend);

struct EntailmentScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Harmonic mean; 0 when p + r = 0.
double harmonic_f1(double precision, double recall);

// Fraction of predicted atoms entailed by the reference set. Empty pred gives
// 0 and an "EmptyClaimSet" diagnostic.
double entailment_precision(std::span<const EventAtom> pred, std::span<const EventAtom> ref,
                            EntailmentBackend& backend, Diagnostics* diagnostics = nullptr);
// Fraction of reference atoms entailed by the predicted set.
double entailment_recall(std::span<const EventAtom> pred, std::span<const EventAtom> ref,
                         EntailmentBackend& backend, Diagnostics* diagnostics = nullptr);
EntailmentScore entailment_f1(std::span<const EventAtom> pred, std::span<const EventAtom> ref,
                              EntailmentBackend& backend, Diagnostics* diagnostics = nullptr);

}  // namespace tlsum
