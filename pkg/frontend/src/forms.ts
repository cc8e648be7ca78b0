/** Measurement data entry: manual forms and file uploads.
 *
 * Rejections (client-side validation or a 422 from the service) render
 * inline and leave the entered values untouched; an accepted submission
 * triggers an immediate view refresh via the callback.
 */

import { ApiClient, ApiError, rejectionMessages } from "./api";
import type { FormDescriptor } from "./types";

function h<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const el = document.createElement(tag);
  if (className) el.className = className;
  if (text !== undefined) el.textContent = text;
  return el;
}

function inputFor(kind: string): HTMLInputElement {
  const input = document.createElement("input");
  if (kind === "timestamp") input.type = "date";
  else input.type = "text";
  return input;
}

/** Parse one field per its schema kind; an error string means invalid. */
export function coerceValue(kind: string, raw: string): { value?: unknown; error?: string } {
  const text = raw.trim();
  if (text === "") return { error: "required" };
  if (kind === "number") {
    const value = Number(text);
    if (!Number.isFinite(value)) return { error: "not a number" };
    return { value };
  }
  if (kind === "integer") {
    const value = Number(text);
    if (!Number.isInteger(value)) return { error: "not an integer" };
    return { value };
  }
  if (kind === "boolean") {
    if (text !== "true" && text !== "false") return { error: "true or false" };
    return { value: text === "true" };
  }
  return { value: text }; // text, reference, timestamp travel as strings
}

function showErrors(box: HTMLElement, messages: string[]): void {
  box.replaceChildren();
  for (const message of messages) box.appendChild(h("p", "form-error", message));
}

function renderManualForm(
  descriptor: FormDescriptor,
  client: ApiClient,
  onAccepted: () => void,
): HTMLElement {
  const form = h("form", "entry-form");
  form.dataset.form = descriptor.instanceId;
  form.appendChild(h("h3", "form-title", descriptor.name));
  const inputs = new Map<string, HTMLInputElement>();
  for (const field of descriptor.fields) {
    const row = h("label", "form-row");
    row.appendChild(h("span", "field-name", field.name));
    const input = inputFor(field.kind);
    input.name = field.name;
    inputs.set(field.name, input);
    row.appendChild(input);
    form.appendChild(row);
  }
  const errors = h("div", "form-errors");
  form.appendChild(errors);
  const submit = h("button", "submit", "submit");
  submit.type = "submit";
  form.appendChild(submit);

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const values: Record<string, unknown> = {};
    const problems: string[] = [];
    for (const field of descriptor.fields) {
      const raw = inputs.get(field.name)?.value ?? "";
      const parsed = coerceValue(field.kind, raw);
      if (parsed.error !== undefined) problems.push(`${field.name}: ${parsed.error}`);
      else values[field.name] = parsed.value;
    }
    if (problems.length > 0) {
      showErrors(errors, problems); // no request, values stay put
      return;
    }
    submit.disabled = true;
    client
      .submitValues(descriptor.instanceId, values)
      .then(() => {
        showErrors(errors, []);
        onAccepted();
      })
      .catch((error) => {
        if (error instanceof ApiError && error.status === 422) {
          showErrors(errors, rejectionMessages(error.body));
        } else {
          showErrors(errors, [String(error)]);
        }
      })
      .finally(() => {
        submit.disabled = false;
      });
  });
  return form;
}

function readFileText(file: File): Promise<string> {
  // File.text() is missing in some environments; FileReader always works
  if (typeof file.text === "function") return file.text();
  return new Promise((resolve, reject) => {
    const reader = new FileReader();
    reader.onload = () => resolve(String(reader.result));
    reader.onerror = () => reject(reader.error);
    reader.readAsText(file);
  });
}

function renderUploadForm(
  descriptor: FormDescriptor,
  client: ApiClient,
  onAccepted: () => void,
): HTMLElement {
  const form = h("form", "upload-form");
  form.dataset.form = descriptor.instanceId;
  form.appendChild(h("h3", "form-title", descriptor.name));
  const file = document.createElement("input");
  file.type = "file";
  form.appendChild(file);
  const errors = h("div", "form-errors");
  form.appendChild(errors);
  const submit = h("button", "submit", "upload");
  submit.type = "submit";
  form.appendChild(submit);

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const chosen = file.files?.[0];
    if (!chosen) {
      showErrors(errors, ["choose a file first"]);
      return;
    }
    submit.disabled = true;
    readFileText(chosen)
      .then((content) => client.uploadFile(descriptor.instanceId, content, chosen.name))
      .then(() => {
        showErrors(errors, []);
        onAccepted();
      })
      .catch((error) => {
        if (error instanceof ApiError && error.status === 422) {
          showErrors(errors, rejectionMessages(error.body));
        } else {
          showErrors(errors, [String(error)]);
        }
      })
      .finally(() => {
        submit.disabled = false;
      });
  });
  return form;
}

export function renderForms(
  container: HTMLElement,
  descriptors: FormDescriptor[],
  client: ApiClient,
  onAccepted: () => void,
): void {
  container.replaceChildren();
  for (const descriptor of descriptors) {
    container.appendChild(
      descriptor.mode === "manual-entry"
        ? renderManualForm(descriptor, client, onAccepted)
        : renderUploadForm(descriptor, client, onAccepted),
    );
  }
}
