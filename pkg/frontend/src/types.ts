/** Client mirror of the view-model document contract (docs/viewmodel.md). */

export type ViewStatus = "ok" | "no-data" | "stale-refreshing";

export interface DrilldownNode {
  activity: string;
  name: string;
  actual: number;
  planned: number | null;
  deviation: number | null;
  status: string;
  children: DrilldownNode[];
}

export interface ViewModelDocument {
  view: string;
  kind: string;
  title: string;
  status: ViewStatus;
  roles: string[];
  inputs: Record<string, number>;
  data: Record<string, unknown>;
  children: Record<string, ViewModelDocument>;
}

export interface ViewsResponse {
  views: ViewModelDocument[];
}

export interface FormField {
  name: string;
  kind: string;
  nullable?: boolean;
}

/** One usable form: instance id plus what its registered spec says about it. */
export interface FormDescriptor {
  instanceId: string;
  name: string;
  mode: "manual-entry" | "file-import";
  fields: FormField[];
}

export interface FormAccepted {
  changed: string[];
  recomputed: string[];
  stale_views: string[];
}
