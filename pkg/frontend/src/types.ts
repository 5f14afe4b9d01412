/** Wire types for the annotation HTTP API.
 *
 * Every field mirrors the server payload exactly; the client never reshapes
 * or rewrites content, it only renders it.
 */

/** The seven label choices in their fixed display order (Skip always last).
 *
 * The order is load-bearing: keyboard shortcuts 1-7 map onto it, and button
 * colors are assigned by position. `main.ts` verifies at startup that the
 * server's `/api/labels/choices` returns exactly this list.
 */
export const LABELS = [
  "Comparison",
  "Informational",
  "Navigational",
  "Support",
  "Transactional",
  "NotProduct",
  "Skip",
] as const;

export type Label = (typeof LABELS)[number];

/** Category labels are the label choices minus Skip; agreement is computed over these. */
export const CATEGORY_LABELS = LABELS.slice(0, -1) as readonly Label[];

/** Map a keyboard key ("1".."7") to its label, or null for any other key. */
export function labelForKey(key: string): Label | null {
  const index = "1234567".indexOf(key);
  if (index === -1 || key.length !== 1) return null;
  return LABELS[index] ?? null;
}

export interface ClickView {
  url: string;
  snippet: string;
}

export interface ItemView {
  query_id: string;
  topic: number;
  query: string;
  clicks: ClickView[];
}

/** GET /api/items/next — item is null once the annotator's queue is exhausted. */
export interface NextItemResponse {
  item: ItemView | null;
  remaining: number;
  labeled: number;
}

/** POST /api/labels */
export interface SubmitResponse {
  ok: boolean;
  status: string;
}

export interface AnnotatorProgress {
  labeled: number;
  total: number;
}

/** GET /api/progress */
export interface ProgressResponse {
  n_items: number;
  statuses: Record<string, number>;
  annotators: Record<string, AnnotatorProgress>;
}

/** GET /api/agreement — kappa is null while no item has labels from every annotator. */
export interface AgreementResponse {
  kappa: number | null;
  n_items: number;
  n_raters: number;
  category_proportions: Record<string, number>;
  consensus: Record<string, string>;
}
