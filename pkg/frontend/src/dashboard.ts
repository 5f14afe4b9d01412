/** Agreement dashboard view-model: API payloads in, display-ready values out. */

import type { AgreementResponse, ProgressResponse } from "./types.js";
import { CATEGORY_LABELS } from "./types.js";

export interface LabelRow {
  label: string;
  /** Count of label assignments across the items entering the agreement table. */
  count: number;
  /** Share of assignments, formatted as a percent string ("25.0%"). */
  shareDisplay: string;
}

export interface AnnotatorRow {
  id: string;
  labeled: number;
  total: number;
}

export interface DashboardView {
  /** Fleiss kappa to two decimals, or "insufficient data" while undefined. */
  kappaDisplay: string;
  kappaDefined: boolean;
  nItems: number;
  nRaters: number;
  statuses: { pending: number; partial: number; complete: number };
  labels: LabelRow[];
  annotators: AnnotatorRow[];
}

export function formatKappa(kappa: number | null): string {
  return kappa === null ? "insufficient data" : kappa.toFixed(2);
}

/** Assemble the dashboard from the two payloads it is a pure function of. */
export function dashboardView(
  agreement: AgreementResponse,
  progress: ProgressResponse,
): DashboardView {
  // Proportions cover fully-labeled items only; recover counts from the table
  // size (items x raters) so the rows read as tallies, not ratios.
  const assignments = agreement.n_items * agreement.n_raters;
  const labels: LabelRow[] = CATEGORY_LABELS.map((label) => {
    const share = agreement.category_proportions[label] ?? 0;
    return {
      label,
      count: Math.round(share * assignments),
      shareDisplay: `${(share * 100).toFixed(1)}%`,
    };
  });
  const annotators: AnnotatorRow[] = Object.keys(progress.annotators)
    .sort()
    .map((id) => {
      const entry = progress.annotators[id] ?? { labeled: 0, total: 0 };
      return { id, labeled: entry.labeled, total: entry.total };
    });
  return {
    kappaDisplay: formatKappa(agreement.kappa),
    kappaDefined: agreement.kappa !== null,
    nItems: agreement.n_items,
    nRaters: agreement.n_raters,
    statuses: {
      pending: progress.statuses["pending"] ?? 0,
      partial: progress.statuses["partially_labeled"] ?? 0,
      complete: progress.statuses["complete"] ?? 0,
    },
    labels,
    annotators,
  };
}
