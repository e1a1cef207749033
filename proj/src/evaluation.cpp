//==============================================================================
// Copyright 2026 The rangemos Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//==============================================================================

#include "rangemos/evaluation.hpp"
#include "rangemos/errors.hpp"

#include <iomanip>
#include <sstream>

namespace rangemos
{

namespace
{
std::string FormatIou(const std::optional<double>& iou)
{
  if (!iou)
    return "undefined";
  std::ostringstream s;
  s << std::fixed << std::setprecision(6) << *iou;
  return s.str();
}
} // namespace

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& o)
{
  tp += o.tp;
  fp += o.fp;
  fn += o.fn;
  tn += o.tn;
  return *this;
}

ConfusionMatrix accumulate(std::span<const std::uint8_t> pred, std::span<const std::uint8_t> gt, ConfusionMatrix cm)
{
  if (pred.size() != gt.size())
    throw ContractError("accumulate: " + std::to_string(pred.size()) + " predictions for " +
                        std::to_string(gt.size()) + " ground-truth labels");
  for (std::size_t i = 0; i < pred.size(); ++i)
  {
    const bool p = pred[i] != 0;
    const bool g = gt[i] != 0;
    if (p && g)
      ++cm.tp;
    else if (p)
      ++cm.fp;
    else if (g)
      ++cm.fn;
    else
      ++cm.tn;
  }
  return cm;
}

std::optional<double> iou_moving(const ConfusionMatrix& cm)
{
  const std::uint64_t denom = cm.tp + cm.fp + cm.fn;
  if (denom == 0)
    return std::nullopt;
  return static_cast<double>(cm.tp) / static_cast<double>(denom);
}

ConfusionMatrix EvaluationReport::overall() const
{
  ConfusionMatrix total;
  for (const ScanEvaluation& s : scans)
    total += s.cm;
  return total;
}

std::size_t EvaluationReport::excluded_scans() const
{
  std::size_t n = 0;
  for (const ScanEvaluation& s : scans)
    n += iou_moving(s.cm) ? 0 : 1;
  return n;
}

std::string EvaluationReport::to_text() const
{
  std::ostringstream out;
  out << "scan      tp        fp        fn        tn        iou_moving\n";
  for (const ScanEvaluation& s : scans)
  {
    out << std::left << std::setw(10) << s.index << std::setw(10) << s.cm.tp << std::setw(10) << s.cm.fp
        << std::setw(10) << s.cm.fn << std::setw(10) << s.cm.tn << FormatIou(iou_moving(s.cm)) << '\n';
  }
  const ConfusionMatrix total = overall();
  out << "overall   tp=" << total.tp << " fp=" << total.fp << " fn=" << total.fn << " tn=" << total.tn
      << " iou_moving=" << FormatIou(iou_moving(total)) << " (" << excluded_scans()
      << " scans with undefined IoU)\n";
  return out.str();
}

std::string EvaluationReport::to_key_value() const
{
  std::ostringstream out;
  for (const ScanEvaluation& s : scans)
  {
    out << "scan=" << s.index << " tp=" << s.cm.tp << " fp=" << s.cm.fp << " fn=" << s.cm.fn << " tn=" << s.cm.tn
        << " iou_moving=" << FormatIou(iou_moving(s.cm)) << '\n';
  }
  const ConfusionMatrix total = overall();
  out << "scans=" << scans.size() << '\n'
      << "excluded_scans=" << excluded_scans() << '\n'
      << "tp=" << total.tp << '\n'
      << "fp=" << total.fp << '\n'
      << "fn=" << total.fn << '\n'
      << "tn=" << total.tn << '\n'
      << "iou_moving=" << FormatIou(iou_moving(total)) << '\n';
  return out.str();
}

} // namespace rangemos
