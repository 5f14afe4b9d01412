/** HTML builders. Pure string functions so the markup is testable without a DOM;
 * `mount` in main.ts owns the only innerHTML assignment and event wiring.
 */

import type { DashboardView } from "./dashboard.js";
import type { SessionState } from "./session.js";
import { LABELS } from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

/** CSS hook for a label's fixed color, e.g. "label-notproduct". */
export function labelClass(label: string): string {
  return `label-${label.toLowerCase()}`;
}

/** The seven choice buttons in fixed order, keyboard digit shown on each. */
export function labelButtonsHtml(state: SessionState): string {
  const disabled = state.phase === "submitting" ? " disabled" : "";
  const buttons = LABELS.map(
    (label, index) =>
      `<button class="label-button ${labelClass(label)}" data-label="${label}"${disabled}>` +
      `<kbd>${index + 1}</kbd> ${label}</button>`,
  );
  return `<div class="label-buttons">${buttons.join("")}</div>`;
}

export function bannerHtml(error: string | null): string {
  if (error === null) return "";
  return (
    `<div class="retry-banner" role="alert">` +
    `<span class="retry-text">${escapeHtml(error)}</span>` +
    `<button class="retry-button">Retry</button></div>`
  );
}

export function itemCardHtml(state: SessionState): string {
  const item = state.item;
  if (item === null) return "";
  const clicks = item.clicks
    .map(
      (click) =>
        `<li class="click">` +
        `<span class="click-url">${escapeHtml(click.url)}</span>` +
        `<span class="click-snippet">${escapeHtml(click.snippet)}</span></li>`,
    )
    .join("");
  const clickList = item.clicks.length
    ? `<ol class="clicks">${clicks}</ol>`
    : `<p class="no-clicks">No clicked results.</p>`;
  return (
    `<section class="item-card" data-query-id="${escapeHtml(item.query_id)}">` +
    `<header><span class="topic-badge">topic ${item.topic}</span>` +
    `<span class="progress-note">${state.labeled} labeled &middot; ${state.remaining} remaining</span></header>` +
    `<h2 class="query-text">${escapeHtml(item.query)}</h2>` +
    clickList +
    labelButtonsHtml(state) +
    `</section>`
  );
}

export function completionHtml(state: SessionState): string {
  return (
    `<section class="completion">` +
    `<h2>All done</h2>` +
    `<p>You labeled ${state.labeled} item${state.labeled === 1 ? "" : "s"}. ` +
    `Nothing remains in your queue.</p></section>`
  );
}

/** The annotator-facing pane for the current phase. */
export function sessionHtml(state: SessionState): string {
  const banner = bannerHtml(state.error);
  switch (state.phase) {
    case "idle":
    case "loading":
      return banner + `<p class="loading">Loading&hellip;</p>`;
    case "done":
      return banner + completionHtml(state);
    case "labeling":
    case "submitting":
      return banner + itemCardHtml(state);
  }
}

export function dashboardHtml(view: DashboardView): string {
  const kappa = view.kappaDefined
    ? `<span class="kappa-value">${view.kappaDisplay}</span>`
    : `<span class="kappa-missing">${view.kappaDisplay}</span>`;
  const labelRows = view.labels
    .map(
      (row) =>
        `<tr><td><span class="swatch ${labelClass(row.label)}"></span>${row.label}</td>` +
        `<td class="num">${row.count}</td><td class="num">${row.shareDisplay}</td></tr>`,
    )
    .join("");
  const annotatorRows = view.annotators
    .map(
      (row) =>
        `<li><span class="annotator-id">${escapeHtml(row.id)}</span> ` +
        `${row.labeled}/${row.total}</li>`,
    )
    .join("");
  return (
    `<aside class="dashboard">` +
    `<h3>Agreement</h3>` +
    `<p class="kappa">&kappa; ${kappa}</p>` +
    `<p class="coverage">${view.nItems} item${view.nItems === 1 ? "" : "s"} &times; ` +
    `${view.nRaters} raters in table &middot; ` +
    `${view.statuses.complete} complete / ${view.statuses.partial} partial / ` +
    `${view.statuses.pending} pending</p>` +
    `<table class="label-counts"><thead><tr><th>Label</th><th>Count</th><th>Share</th></tr></thead>` +
    `<tbody>${labelRows}</tbody></table>` +
    `<h3>Annotators</h3><ul class="annotator-progress">${annotatorRows}</ul>` +
    `</aside>`
  );
}

/** Landing screen: pick who you are; ids come from /api/progress. */
export function entryHtml(annotators: string[]): string {
  const buttons = annotators
    .map(
      (id) =>
        `<button class="annotator-button" data-annotator="${escapeHtml(id)}">` +
        `${escapeHtml(id)}</button>`,
    )
    .join("");
  return (
    `<section class="entry"><h2>Who is annotating?</h2>` +
    `<div class="annotator-choices">${buttons}</div></section>`
  );
}

export function appHtml(state: SessionState, dashboard: string): string {
  return (
    `<div class="layout">` +
    `<header class="top-bar"><h1>Query annotation</h1>` +
    `<span class="annotator-name">${escapeHtml(state.annotator)}</span></header>` +
    `<main class="session-pane">${sessionHtml(state)}</main>` +
    dashboard +
    `</div>`
  );
}
