// Payload shapes of the /v1 service API. Raw times are in days unless the
// field name says otherwise.

export interface NodePayload {
  id: string;
  x: number;
  y: number;
  ev_count: number;
  arrival_rate?: number;
}

export interface StationPayload {
  id: string;
  x: number;
  y: number;
  chargers: number;
  charger_class: "LEVEL2" | "DCFC" | "CUSTOM";
  service_rate?: number;
}

export interface NetworkPayload {
  distance_mode: "euclidean" | "haversine" | "matrix";
  speed?: number;
  nodes: NodePayload[];
  stations: StationPayload[];
  travel_matrix?: number[][];
}

export interface FieldError {
  field: string;
  message: string;
}

export interface Progress {
  iteration: number;
  epsilon: number | null;
  wardrop_gap: number | null;
}

export type JobStatus = "QUEUED" | "RUNNING" | "DONE" | "FAILED";

export interface JobView {
  job_id: string;
  kind: "SOLVE" | "CALIBRATE" | "COMPARE";
  status: JobStatus;
  progress: Progress;
  error: string | null;
}

export interface StationReport {
  id: string;
  charger_class: string;
  chargers: number;
  flow: number;
  rho: number;
  wq_days: number;
  w_days: number;
  over_capacity: boolean;
}

export interface NodeReport {
  id: string;
  access_time_min: number;
  total_time_min: number;
}

export interface SystemMetrics {
  total_access_time_days: number;
  total_access_plus_charging_days: number;
  avg_access_time_min: number;
  avg_access_plus_charging_hours: number;
  zero_demand: boolean;
}

export interface SolveResult {
  converged: boolean;
  iterations: number;
  final_epsilon: number | null;
  wardrop_gap: number;
  assignment: number[][];
  station_report: StationReport[];
  node_report: NodeReport[];
  system_metrics: SystemMetrics;
  warnings: string[];
}

export interface Upgrade {
  station_id: string;
  dcfc_count: number;
}

export interface ScenarioPayload {
  name: string;
  upgrades: Upgrade[];
  dcfc_service_rate?: number;
}

export interface CompareRowMetrics {
  total_access_time_days: number;
  total_access_plus_charging_days: number;
  avg_access_time_min: number;
  avg_access_plus_charging_hours: number;
  zero_demand: boolean;
}

export interface CompareRow {
  name: string;
  failed: boolean;
  error: string | null;
  metrics?: CompareRowMetrics;
  converged?: boolean;
  iterations?: number;
  final_epsilon?: number | null;
  wardrop_gap?: number;
}

export interface CompareResult {
  rows: CompareRow[];
}

export interface Rankings {
  criterion: "utilization" | "queue_delay";
  charger_class: string | null;
  station_ids: string[];
}
