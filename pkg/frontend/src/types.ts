/** JSON shapes served by the session API (schema version "1"). */

export type Side = "l" | "r";
export type Direction = "lr" | "rl";

export interface Point {
  x: number;
  y: number;
}

export interface NodeJson {
  id: number;
  kind: "gen" | "box";
  name: string;
  src: string[];
  tgt: string[];
  x: number;
  y: number;
  w: number;
  h: number;
  shape: "rect" | "triangle" | "circle";
  color: string | null;
  outline: [number, number][] | null;
  inner?: string;
}

export interface EdgeJson {
  id: number;
  obj: string;
  route: [number, number][];
}

export interface DiagramJson {
  schema: string;
  inputs: string[];
  outputs: string[];
  nodes: NodeJson[];
  edges: EdgeJson[];
  width: number;
  height: number;
}

export interface StepJson {
  kind: "unfold" | "trans" | "rewrite" | "close";
  name?: string;
  side?: Side;
  term?: string;
  hyp?: string;
  direction?: Direction;
}

export interface SessionJson {
  id: string;
  revision: number;
  done: boolean;
  lhs: DiagramJson;
  rhs: DiagramJson;
  definitions: string[];
  unfolded: string[];
  hypotheses: Record<string, { lhs: string; rhs: string }>;
  steps: StepJson[];
}

export interface Match {
  hyp: string;
  direction: Direction;
}

export interface BoxResponse extends SessionJson {
  box: number;
  matches: Match[];
}

export interface ExportResponse {
  script: string;
  done: boolean;
}

export const SUPPORTED_SCHEMA = "1";
