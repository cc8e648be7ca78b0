/** Dashboard bootstrap: session, widgets, forms, polling loop.
 *
 * The client is stateless beyond the session settings and per-widget
 * navigation; a reload starts clean from the login panel.
 */

import { ApiClient, ApiError } from "./api";
import { renderForms } from "./forms";
import { Poller } from "./poller";
import { renderDashboard, WidgetState } from "./render";
import type { ViewsResponse } from "./types";

interface Session {
  client: ApiClient;
  catenaId: string;
  pollSeconds: number;
}

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing element #${id}`);
  return found as T;
}

function startDashboard(session: Session): void {
  const { client, catenaId } = session;
  el("login-panel").hidden = true;
  el("dashboard").hidden = false;
  const widgets = el("widgets");
  const notice = el("notice");
  const states = new Map<string, WidgetState>();

  let lastModels: ViewsResponse = { views: [] };
  const paint = () => {
    renderDashboard(widgets, lastModels.views, states, { onNavigate: paint });
  };

  const poller = new Poller<ViewsResponse>(
    () => client.getViews(catenaId),
    (response) => {
      notice.textContent = "";
      lastModels = response;
      paint();
    },
    (error) => {
      if (error instanceof ApiError && error.status === 401) {
        notice.textContent = "session rejected: check your token";
      } else if (error instanceof ApiError && error.status === 403) {
        notice.textContent = "no views for your role";
      } else {
        notice.textContent = `refresh failed: ${String(error)}`;
      }
    },
    session.pollSeconds * 1000,
  );

  client
    .getForms(catenaId)
    .then((descriptors) =>
      renderForms(el("forms"), descriptors, client, () => void poller.refreshNow()),
    )
    .catch(() => {
      el("forms").textContent = "forms unavailable";
    });

  el<HTMLButtonElement>("refresh").addEventListener("click", () => void poller.refreshNow());
  poller.start();
}

export function main(): void {
  const form = el<HTMLFormElement>("login-form");
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const baseUrl = el<HTMLInputElement>("base-url").value.replace(/\/+$/, "");
    const token = el<HTMLInputElement>("token").value.trim();
    const catenaId = el<HTMLInputElement>("catena-id").value.trim();
    const pollSeconds = Number(el<HTMLInputElement>("poll-seconds").value) || 10;
    startDashboard({ client: new ApiClient(baseUrl, token), catenaId, pollSeconds });
  });
}

if (typeof document !== "undefined" && document.getElementById("login-form")) {
  main();
}
