/** Thin fetch client for the control-center HTTP API. */

import type { FormAccepted, FormDescriptor, ViewsResponse } from "./types";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly body: unknown,
  ) {
    super(`HTTP ${status}`);
  }
}

/** Flatten a 422 body into user-facing message strings. */
export function rejectionMessages(body: unknown): string[] {
  const detail = (body as { detail?: unknown })?.detail;
  if (detail && typeof detail === "object") {
    const errors = (detail as { errors?: unknown }).errors;
    if (Array.isArray(errors)) return errors.map(String);
    const diagnostics = (detail as { diagnostics?: unknown }).diagnostics;
    if (Array.isArray(diagnostics)) {
      return diagnostics.map((d) => {
        const { subject, code, message } = d as Record<string, string>;
        return `${subject}: ${code}: ${message}`;
      });
    }
  }
  return ["request rejected"];
}

export class ApiClient {
  constructor(
    readonly baseUrl: string,
    readonly token: string,
  ) {}

  private async request(method: string, path: string, body?: unknown): Promise<unknown> {
    const response = await fetch(this.baseUrl + path, {
      method,
      headers: {
        Authorization: `Bearer ${this.token}`,
        ...(body === undefined ? {} : { "Content-Type": "application/json" }),
      },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    let parsed: unknown = null;
    try {
      parsed = await response.json();
    } catch {
      parsed = null;
    }
    if (!response.ok) throw new ApiError(response.status, parsed);
    return parsed;
  }

  getViews(catenaId: string): Promise<ViewsResponse> {
    return this.request("GET", `/catenas/${catenaId}/views`) as Promise<ViewsResponse>;
  }

  submitValues(formId: string, values: Record<string, unknown>): Promise<FormAccepted> {
    return this.request("POST", `/forms/${formId}`, { values }) as Promise<FormAccepted>;
  }

  uploadFile(formId: string, content: string, filename: string): Promise<FormAccepted> {
    return this.request("POST", `/forms/${formId}`, { content, filename }) as Promise<FormAccepted>;
  }

  /** The catena document plus form specs, folded into render-ready descriptors. */
  async getForms(catenaId: string): Promise<FormDescriptor[]> {
    const catena = (await this.request("GET", `/catenas/${catenaId}`)) as {
      web_forms: { id: string; spec: string }[];
    };
    const repository = (await this.request("GET", "/repository/web-form")) as {
      components: { id: string; body: Record<string, unknown> }[];
    };
    const specs = new Map(repository.components.map((c) => [c.id, c.body]));
    const descriptors: FormDescriptor[] = [];
    for (const instance of catena.web_forms) {
      const spec = specs.get(instance.spec);
      if (!spec) continue;
      descriptors.push({
        instanceId: instance.id,
        name: String(spec.name ?? instance.id),
        mode: spec.mode as FormDescriptor["mode"],
        fields: (spec.fields as FormDescriptor["fields"]) ?? [],
      });
    }
    return descriptors;
  }
}
