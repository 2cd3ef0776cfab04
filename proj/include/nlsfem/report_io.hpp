#pragma once

#include <charconv>
#include <fstream>
#include <string>
#include <system_error>
#include <vector>

#include "nlsfem/errors.hpp"
#include "nlsfem/problem.hpp"
#include "nlsfem/verification.hpp"

namespace nlsfem {

/// Locale-independent decimal rendering with 17 significant digits, enough
/// to round-trip any double.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  if (res.ec != std::errc{}) throw Error("format_double: conversion failed");
  return std::string(buf, res.ptr);
}

/// Per-step CSV. Error columns appear when the run has an exact solution;
/// the wall_time column is opt-in so that default output is bit-reproducible.
inline std::string run_csv(const std::vector<StepRecord>& records,
                           const std::vector<double>* err_l2 = nullptr,
                           const std::vector<double>* err_h1 = nullptr,
                           bool timings = false) {
  const bool with_err = err_l2 != nullptr && err_h1 != nullptr;
  std::string out = "n,t,l2_norm,g_l2";
  if (with_err) out += ",err_l2,err_h1";
  if (timings) out += ",wall_time";
  out += "\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const StepRecord& r = records[i];
    out += std::to_string(r.n);
    out += ",";
    out += format_double(r.t);
    out += ",";
    out += format_double(r.l2_norm);
    out += ",";
    out += format_double(r.g_l2);
    if (with_err) {
      out += ",";
      out += format_double((*err_l2)[i]);
      out += ",";
      out += format_double((*err_h1)[i]);
    }
    if (timings) {
      out += ",";
      out += format_double(r.wall_time);
    }
    out += "\n";
  }
  return out;
}

/// EOC table CSV; the rate fields of the coarsest level are empty.
inline std::string eoc_csv(const EocReport& rep) {
  std::string out = "level,h,k,err_l2,rate_l2,err_h1,rate_h1\n";
  for (std::size_t i = 0; i < rep.levels.size(); ++i) {
    const StudyLevel& lv = rep.levels[i];
    out += std::to_string(i);
    out += ",";
    out += format_double(lv.h);
    out += ",";
    out += format_double(lv.k);
    out += ",";
    out += format_double(lv.err_l2);
    out += ",";
    if (i > 0) out += format_double(rep.rates_l2[i - 1]);
    out += ",";
    out += format_double(lv.err_h1);
    out += ",";
    if (i > 0) out += format_double(rep.rates_h1[i - 1]);
    out += "\n";
  }
  return out;
}

inline std::string consistency_csv(const ConsistencyReport& rep) {
  std::string out = "k,r_half_norm,r_full_norm\n";
  for (std::size_t i = 0; i < rep.ks.size(); ++i) {
    out += format_double(rep.ks[i]);
    out += ",";
    out += format_double(rep.r_half_norms[i]);
    out += ",";
    out += format_double(rep.r_full_norms[i]);
    out += "\n";
  }
  return out;
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot open " + path + " for writing");
  f << content;
  if (!f) throw Error("failed writing " + path);
}

}  // namespace nlsfem
