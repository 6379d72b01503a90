/**
 * Thin typed client for the layout service's HTTP interface.
 *
 * Every call is stateless: the document travels as GraphML text in the
 * request and comes back in the response, so the service never holds
 * editor state.  Errors share one shape — a JSON body with an "error"
 * message and, where the input was at fault, a "violations" list — which
 * this client surfaces as ServiceError so callers can show the message
 * and the per-object details uniformly.
 */

export interface AlgorithmOption {
  name: string;
  type: "number" | "integer";
  default: number;
  description: string;
}

export interface AlgorithmInfo {
  name: string;
  description: string;
  options: AlgorithmOption[];
}

/** Violation rows as the wire carries them; parse failures have no object id. */
export interface ServiceViolation {
  object: number | null;
  rule: string;
  message: string;
}

export interface LayoutReport {
  iterations_used: number;
  final_total_displacement: number;
}

export interface LayoutResult {
  graphml: string;
  report: LayoutReport;
}

/** A request the service answered with an error, or could not answer at all. */
export class ServiceError extends Error {
  constructor(
    readonly status: number,
    message: string,
    readonly violations: ServiceViolation[] | null = null,
  ) {
    super(message);
  }
}

/** What the editor needs from a layout service; ServiceClient is the real one. */
export interface LayoutService {
  algorithms(): Promise<AlgorithmInfo[]>;
  layout(
    graphml: string,
    algorithm: string,
    opts?: { seed?: number; options?: Record<string, number> },
  ): Promise<LayoutResult>;
  render(graphml: string, opts?: { scale?: number; highlightColor?: string }): Promise<string>;
  validate(graphml: string): Promise<ServiceViolation[]>;
}

async function errorFrom(response: Response): Promise<ServiceError> {
  let message = `HTTP ${response.status}`;
  let violations: ServiceViolation[] | null = null;
  try {
    const body = (await response.json()) as { error?: unknown; violations?: unknown };
    if (typeof body.error === "string") {
      message = body.error;
    }
    if (Array.isArray(body.violations)) {
      violations = body.violations as ServiceViolation[];
    }
  } catch {
    // non-JSON error body; the status line is all we have
  }
  return new ServiceError(response.status, message, violations);
}

export class ServiceClient implements LayoutService {
  readonly baseUrl: string;

  constructor(baseUrl: string) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
  }

  private async request(path: string, init?: RequestInit): Promise<Response> {
    let response: Response;
    try {
      response = await fetch(this.baseUrl + path, init);
    } catch (exc) {
      throw new ServiceError(0, `service unreachable: ${exc instanceof Error ? exc.message : String(exc)}`);
    }
    if (!response.ok) {
      throw await errorFrom(response);
    }
    return response;
  }

  private post(path: string, body: unknown): Promise<Response> {
    return this.request(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  async algorithms(): Promise<AlgorithmInfo[]> {
    const response = await this.request("/algorithms");
    const body = (await response.json()) as { algorithms: AlgorithmInfo[] };
    return body.algorithms;
  }

  async layout(
    graphml: string,
    algorithm: string,
    opts: { seed?: number; options?: Record<string, number> } = {},
  ): Promise<LayoutResult> {
    const body: Record<string, unknown> = { graphml, algorithm };
    if (opts.seed !== undefined) {
      body.seed = opts.seed;
    }
    if (opts.options !== undefined) {
      body.options = opts.options;
    }
    const response = await this.post("/layout", body);
    return (await response.json()) as LayoutResult;
  }

  async render(graphml: string, opts: { scale?: number; highlightColor?: string } = {}): Promise<string> {
    const body: Record<string, unknown> = { graphml };
    if (opts.scale !== undefined) {
      body.scale = opts.scale;
    }
    if (opts.highlightColor !== undefined) {
      body.highlightColor = opts.highlightColor;
    }
    const response = await this.post("/render", body);
    return response.text();
  }

  async validate(graphml: string): Promise<ServiceViolation[]> {
    const response = await this.post("/validate", { graphml });
    const body = (await response.json()) as { violations: ServiceViolation[] };
    return body.violations;
  }
}
