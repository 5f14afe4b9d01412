/** Browser entry point: wire the session, dashboard, and keyboard to the DOM. */

import { Api } from "./api.js";
import { dashboardView } from "./dashboard.js";
import { appHtml, dashboardHtml, entryHtml } from "./render.js";
import { AnnotationSession } from "./session.js";
import { labelForKey, LABELS } from "./types.js";

const api = new Api();

function fatal(root: HTMLElement, message: string): void {
  root.innerHTML = `<p class="fatal">${message}</p>`;
}

async function refreshDashboard(): Promise<string> {
  const [agreement, progress] = await Promise.all([api.agreement(), api.progress()]);
  return dashboardHtml(dashboardView(agreement, progress));
}

async function runSession(root: HTMLElement, annotator: string): Promise<void> {
  const session = new AnnotationSession(api, annotator);
  let dashboard = "";
  let lastLabeled = -1;

  const paint = () => {
    root.innerHTML = appHtml(session.getState(), dashboard);
    for (const button of root.querySelectorAll<HTMLButtonElement>(".label-button")) {
      button.addEventListener("click", () => {
        const label = LABELS.find((name) => name === button.dataset["label"]);
        if (label) void session.choose(label);
      });
    }
    root
      .querySelector<HTMLButtonElement>(".retry-button")
      ?.addEventListener("click", () => void session.retry());
  };

  session.subscribe((state) => {
    paint();
    // Refresh agreement whenever the server has seen new labels from us.
    if (state.labeled !== lastLabeled) {
      lastLabeled = state.labeled;
      void refreshDashboard().then((html) => {
        dashboard = html;
        paint();
      });
    }
  });

  document.addEventListener("keydown", (event) => {
    if (event.defaultPrevented || event.altKey || event.ctrlKey || event.metaKey) return;
    const label = labelForKey(event.key);
    if (label) void session.choose(label);
  });

  await session.start();
}

async function boot(): Promise<void> {
  const root = document.getElementById("app");
  if (!root) return;
  let choices: string[];
  try {
    choices = (await api.labelChoices()).labels;
  } catch (exc) {
    fatal(root, `Cannot reach the annotation service: ${String(exc)}`);
    return;
  }
  // The keyboard map and button colors assume this exact order; refuse to run
  // against a server that disagrees rather than mislabel silently.
  if (choices.length !== LABELS.length || choices.some((label, i) => label !== LABELS[i])) {
    fatal(root, "Server label choices do not match this build.");
    return;
  }
  const annotator = new URLSearchParams(window.location.search).get("annotator");
  if (annotator) {
    await runSession(root, annotator);
    return;
  }
  const progress = await api.progress();
  root.innerHTML = entryHtml(Object.keys(progress.annotators).sort());
  for (const button of root.querySelectorAll<HTMLButtonElement>(".annotator-button")) {
    button.addEventListener("click", () => {
      const params = new URLSearchParams(window.location.search);
      params.set("annotator", button.dataset["annotator"] ?? "");
      window.location.search = params.toString();
    });
  }
}

void boot();
